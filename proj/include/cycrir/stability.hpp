#pragma once

#include <string>
#include <vector>

#include "cycrir/rational.hpp"

namespace cycrir {

enum class StabilityClass { strictly_unstable, marginal, stable };

inline const char* to_string(StabilityClass c) {
    switch (c) {
        case StabilityClass::strictly_unstable: return "strictly_unstable";
        case StabilityClass::marginal: return "marginal";
        case StabilityClass::stable: return "stable";
    }
    return "?";
}

/// Root locations of a polynomial relative to the imaginary axis.
/// strictly_unstable: at least one root with Re > +tol_axis.
/// marginal: no such root but at least one with |Re| <= tol_axis.
/// stable: all roots with Re < -tol_axis.
struct StabilityReport {
    std::vector<cplx> roots;
    StabilityClass classification = StabilityClass::stable;
    int n_crhp = 0;
    int n_axis = 0;
    double stability_margin = 0.0;  // max over roots of Re
};

inline StabilityReport classify_roots(std::vector<cplx> roots, double tol_axis = kTolAxis) {
    StabilityReport rep;
    rep.roots = std::move(roots);
    sort_roots(rep.roots);
    rep.stability_margin = -std::numeric_limits<double>::infinity();
    for (const cplx& r : rep.roots) {
        if (r.real() > tol_axis) ++rep.n_crhp;
        else if (std::abs(r.real()) <= tol_axis) ++rep.n_axis;
        rep.stability_margin = std::max(rep.stability_margin, r.real());
    }
    if (rep.n_crhp >= 1) rep.classification = StabilityClass::strictly_unstable;
    else if (rep.n_axis >= 1) rep.classification = StabilityClass::marginal;
    else rep.classification = StabilityClass::stable;
    return rep;
}

inline StabilityReport classify_stability(const ComplexPoly& p, double tol_axis = kTolAxis) {
    if (p.is_zero() || p.degree() < 1)
        throw ValidationError("classify_stability: constant or zero polynomial has no roots");
    return classify_roots(poly_roots(p), tol_axis);
}

/// Pole-based stability of a rational function; a constant denominator means
/// no poles, hence stable.
inline bool is_stable_rational(const RationalFn& g, double tol_axis = kTolAxis) {
    if (g.den().degree() < 1) return true;
    return classify_stability(g.den(), tol_axis).classification == StabilityClass::stable;
}

}  // namespace cycrir
