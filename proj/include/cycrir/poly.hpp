#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <initializer_list>
#include <utility>
#include <vector>

#include "cycrir/errors.hpp"
#include "cycrir/tolerances.hpp"

namespace cycrir {

using cplx = std::complex<double>;

/// Univariate polynomial with complex coefficients, stored in descending
/// powers of s (coeffs()[0] is the leading coefficient). The representation
/// is canonical: leading near-zero coefficients are stripped on
/// construction, and the zero polynomial is the single coefficient 0.
class ComplexPoly {
public:
    ComplexPoly() : coeffs_{cplx(0.0, 0.0)} {}

    explicit ComplexPoly(std::vector<cplx> coeffs) : coeffs_(std::move(coeffs)) {
        canonicalize();
    }

    /// Real coefficients, descending powers: {1, 4, 3} is s^2 + 4s + 3.
    ComplexPoly(std::initializer_list<double> real_coeffs) {
        coeffs_.reserve(real_coeffs.size());
        for (double c : real_coeffs) coeffs_.emplace_back(c, 0.0);
        canonicalize();
    }

    static ComplexPoly from_real(const std::vector<double>& real_coeffs) {
        std::vector<cplx> c(real_coeffs.begin(), real_coeffs.end());
        return ComplexPoly(std::move(c));
    }

    /// leading * prod_k (s - roots[k]).
    static ComplexPoly from_roots(const std::vector<cplx>& roots, cplx leading = cplx(1.0)) {
        std::vector<cplx> c{leading};
        for (const cplx& r : roots) {
            std::vector<cplx> next(c.size() + 1, cplx(0.0));
            for (std::size_t i = 0; i < c.size(); ++i) {
                next[i] += c[i];
                next[i + 1] -= c[i] * r;
            }
            c = std::move(next);
        }
        return ComplexPoly(std::move(c));
    }

    const std::vector<cplx>& coeffs() const { return coeffs_; }

    /// Degree of the canonical representation; 0 for constants and for the
    /// zero polynomial (use is_zero() to distinguish).
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }

    bool is_zero() const { return coeffs_.size() == 1 && coeffs_[0] == cplx(0.0); }

    cplx leading() const { return coeffs_.front(); }

    double max_coeff_magnitude() const {
        double m = 0.0;
        for (const cplx& c : coeffs_) m = std::max(m, std::abs(c));
        return m;
    }

    /// All imaginary parts below rel_tol * max coefficient magnitude.
    bool is_real(double rel_tol = kTolCoeffRel) const {
        const double tol = rel_tol * max_coeff_magnitude();
        for (const cplx& c : coeffs_)
            if (std::abs(c.imag()) > tol) return false;
        return true;
    }

    std::vector<double> real_coeffs() const {
        std::vector<double> out;
        out.reserve(coeffs_.size());
        for (const cplx& c : coeffs_) out.push_back(c.real());
        return out;
    }

    /// Horner evaluation.
    cplx eval(cplx s) const {
        cplx acc = coeffs_[0];
        for (std::size_t i = 1; i < coeffs_.size(); ++i) acc = acc * s + coeffs_[i];
        return acc;
    }

    ComplexPoly derivative() const {
        const int d = degree();
        if (d < 1) return ComplexPoly();
        std::vector<cplx> c(static_cast<std::size_t>(d));
        for (int m = 0; m < d; ++m) c[static_cast<std::size_t>(m)] = coeffs_[static_cast<std::size_t>(m)] * cplx(static_cast<double>(d - m));
        return ComplexPoly(std::move(c));
    }

    /// Coefficient-wise conjugate (for real omega, conj(p)(w) == conj(p(w))).
    ComplexPoly conjugate_coeffs() const {
        std::vector<cplx> c(coeffs_.size());
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = std::conj(coeffs_[i]);
        return ComplexPoly(std::move(c));
    }

    friend ComplexPoly operator+(const ComplexPoly& a, const ComplexPoly& b) {
        const std::size_t na = a.coeffs_.size(), nb = b.coeffs_.size();
        const std::size_t n = std::max(na, nb);
        std::vector<cplx> c(n, cplx(0.0));
        for (std::size_t i = 0; i < na; ++i) c[n - na + i] += a.coeffs_[i];
        for (std::size_t i = 0; i < nb; ++i) c[n - nb + i] += b.coeffs_[i];
        return ComplexPoly(std::move(c));
    }

    friend ComplexPoly operator-(const ComplexPoly& a, const ComplexPoly& b) { return a + (b * cplx(-1.0)); }

    friend ComplexPoly operator*(const ComplexPoly& a, const ComplexPoly& b) {
        if (a.is_zero() || b.is_zero()) return ComplexPoly();
        std::vector<cplx> c(a.coeffs_.size() + b.coeffs_.size() - 1, cplx(0.0));
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
            for (std::size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
        return ComplexPoly(std::move(c));
    }

    friend ComplexPoly operator*(const ComplexPoly& a, cplx k) {
        std::vector<cplx> c(a.coeffs_);
        for (cplx& x : c) x *= k;
        return ComplexPoly(std::move(c));
    }

    friend ComplexPoly operator*(cplx k, const ComplexPoly& a) { return a * k; }

private:
    // Strips exact-zero leading coefficients, then leading rounding residue
    // judged against the next few coefficients. Comparing against nearby
    // coefficients (not the global maximum) keeps genuinely small leading
    // coefficients of wide-dynamic-range polynomials such as
    // (tau s + 1)^n + (K mu)^n at n = 21.
    void canonicalize() {
        if (coeffs_.empty()) {
            coeffs_.assign(1, cplx(0.0));
            return;
        }
        std::size_t first = 0;
        const auto junk = [&](std::size_t i) {
            const double mag = std::abs(coeffs_[i]);
            if (mag == 0.0) return true;
            double local = 0.0;
            for (std::size_t k = i + 1; k < coeffs_.size() && k <= i + 4; ++k)
                local = std::max(local, std::abs(coeffs_[k]));
            return mag <= kTolCoeffRel * local;
        };
        while (first + 1 < coeffs_.size() && junk(first)) ++first;
        if (first > 0) coeffs_.erase(coeffs_.begin(), coeffs_.begin() + static_cast<std::ptrdiff_t>(first));
    }

    std::vector<cplx> coeffs_;
};

/// Binary exponentiation; poly_pow(p, 0) is the constant 1.
inline ComplexPoly poly_pow(const ComplexPoly& p, int k) {
    if (k < 0) throw ValidationError("poly_pow: exponent must be nonnegative");
    ComplexPoly result({1.0});
    ComplexPoly base = p;
    while (k > 0) {
        if (k & 1) result = result * base;
        base = base * base;
        k >>= 1;
    }
    return result;
}

inline cplx poly_eval(const ComplexPoly& p, cplx s) { return p.eval(s); }

inline ComplexPoly poly_mul(const ComplexPoly& a, const ComplexPoly& b) { return a * b; }
inline ComplexPoly poly_add(const ComplexPoly& a, const ComplexPoly& b) { return a + b; }

/// p(s) reinterpreted as a polynomial in w where s = jw. Coefficients stay
/// descending in w; coefficient of w^m picks up the factor j^m.
inline ComplexPoly substitute_jomega(const ComplexPoly& p) {
    static const cplx jpow[4] = {cplx(1, 0), cplx(0, 1), cplx(-1, 0), cplx(0, -1)};
    const auto& c = p.coeffs();
    const int d = p.degree();
    std::vector<cplx> out(c.size());
    for (int m = 0; m <= d; ++m) out[static_cast<std::size_t>(m)] = c[static_cast<std::size_t>(m)] * jpow[(d - m) % 4];
    return ComplexPoly(std::move(out));
}

/// |p(jw)|^2 as a real-coefficient polynomial in real w.
inline ComplexPoly magnitude_squared_on_axis(const ComplexPoly& p) {
    const ComplexPoly q = substitute_jomega(p);
    const ComplexPoly a = q * q.conjugate_coeffs();
    // The product is self-conjugate for real w; imaginary parts are rounding.
    std::vector<cplx> c(a.coeffs().size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = cplx(a.coeffs()[i].real(), 0.0);
    return ComplexPoly(std::move(c));
}

}  // namespace cycrir
