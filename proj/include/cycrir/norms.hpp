#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "cycrir/stability.hpp"

namespace cycrir {

/// Peak gain on the imaginary axis and a frequency attaining it.
/// value is +infinity when the denominator has a root on the axis;
/// omega_peak is +infinity when the supremum is the |w| -> inf limit.
struct LinfResult {
    double value = 0.0;
    double omega_peak = 0.0;
};

inline constexpr double kInfNorm = std::numeric_limits<double>::infinity();

/// sup over real w of |g(jw)|, computed to root accuracy: the critical
/// frequencies are the real roots of d/dw |g(jw)|^2 written as a real
/// rational function of w; |g| is then evaluated there, at w = 0, and at the
/// |w| -> inf limit, and the maximum is returned.
inline LinfResult linf_norm_detailed(const RationalFn& g, double tol_axis = kTolAxis) {
    if (!g.is_proper()) throw ValidationError("linf_norm: improper rational function");
    if (g.num().is_zero()) return {0.0, 0.0};

    // Axis pole => unbounded gain.
    if (g.den().degree() >= 1) {
        for (const cplx& r : poly_roots(g.den()))
            if (std::abs(r.real()) <= tol_axis) return {kInfNorm, r.imag()};
    }

    const auto gain_at = [&g](double w) {
        const cplx s(0.0, w);
        return std::abs(g.num().eval(s)) / std::abs(g.den().eval(s));
    };

    double best = gain_at(0.0);
    double best_w = 0.0;

    // |w| -> inf limit from leading coefficients.
    if (g.num().degree() == g.den().degree()) {
        const double tail = std::abs(g.num().leading()) / std::abs(g.den().leading());
        if (tail > best) {
            best = tail;
            best_w = kInfNorm;
        }
    }

    const ComplexPoly an = magnitude_squared_on_axis(g.num());
    const ComplexPoly ad = magnitude_squared_on_axis(g.den());
    const ComplexPoly crit = an.derivative() * ad - an * ad.derivative();
    if (!crit.is_zero() && crit.degree() >= 1) {
        for (const cplx& r : poly_roots(crit)) {
            if (std::abs(r.imag()) > 1e-6 * (1.0 + std::abs(r.real()))) continue;
            const double w = r.real();
            const double v = gain_at(w);
            if (v > best) {
                best = v;
                best_w = w;
            }
        }
    }
    return {best, best_w};
}

inline double linf_norm(const RationalFn& g, double tol_axis = kTolAxis) {
    return linf_norm_detailed(g, tol_axis).value;
}

/// Same supremum, defined only for proper stable functions.
inline double hinf_norm(const RationalFn& g, double tol_axis = kTolAxis) {
    if (!g.is_proper()) throw ValidationError("hinf_norm: improper rational function");
    if (!is_stable_rational(g, tol_axis)) throw PreconditionError("hinf_norm: H-infinity undefined for unstable function");
    return linf_norm(g, tol_axis);
}

}  // namespace cycrir
