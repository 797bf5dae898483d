#pragma once

#include <cmath>
#include <sstream>
#include <utility>

#include "cycrir/roots.hpp"

namespace cycrir {

/// Ratio of two complex polynomials. Construction rejects a zero denominator
/// and any approximate common root of numerator and denominator closer than
/// tol_cancel.
class RationalFn {
public:
    RationalFn() : num_(), den_({1.0}) {}

    RationalFn(ComplexPoly num, ComplexPoly den, double tol_cancel = kTolCancel)
        : num_(std::move(num)), den_(std::move(den)) {
        if (den_.is_zero()) throw ValidationError("RationalFn: denominator is the zero polynomial");
        if (!num_.is_zero() && num_.degree() >= 1 && den_.degree() >= 1) {
            const auto zn = poly_roots(num_);
            const auto zd = poly_roots(den_);
            for (const cplx& a : zn)
                for (const cplx& b : zd)
                    if (std::abs(a - b) <= tol_cancel) {
                        std::ostringstream os;
                        os << "RationalFn: numerator and denominator share a root near (" << a.real() << ", "
                           << a.imag() << "j) within tol_cancel";
                        throw NumericalError(os.str());
                    }
        }
    }

    static RationalFn constant(cplx c) { return RationalFn(ComplexPoly({1.0}) * c, ComplexPoly({1.0})); }

    const ComplexPoly& num() const { return num_; }
    const ComplexPoly& den() const { return den_; }

    bool is_proper() const { return num_.is_zero() || num_.degree() <= den_.degree(); }
    bool is_strictly_proper() const { return num_.is_zero() || num_.degree() < den_.degree(); }

    bool is_real(double rel_tol = kTolCoeffRel) const { return num_.is_real(rel_tol) && den_.is_real(rel_tol); }

    /// num(s)/den(s); evaluation at (or numerically on top of) a pole throws
    /// with the pole location in the message.
    cplx eval(cplx s) const {
        const cplx d = den_.eval(s);
        const double scale =
            den_.max_coeff_magnitude() * std::pow(std::max(1.0, std::abs(s)), den_.degree());
        if (std::abs(d) <= 1e-12 * scale) {
            std::ostringstream os;
            os << "RationalFn: evaluation at a pole, s = (" << s.real() << ", " << s.imag() << "j)";
            throw NumericalError(os.str());
        }
        return num_.eval(s) / d;
    }

    RationalFn reciprocal(double tol_cancel = kTolCancel) const {
        if (num_.is_zero()) throw ValidationError("RationalFn: reciprocal of the zero function");
        return RationalFn(den_, num_, tol_cancel);
    }

private:
    ComplexPoly num_;
    ComplexPoly den_;
};

inline cplx rat_eval(const RationalFn& r, cplx s) { return r.eval(s); }

}  // namespace cycrir
