#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "cycrir/poly.hpp"

namespace cycrir {

namespace detail {

struct HornerResult {
    cplx value;
    cplx deriv;
    double errbound;  // running bound on |value| rounding error
};

inline HornerResult horner_full(const std::vector<cplx>& c, cplx z) {
    const double az = std::abs(z);
    cplx p = c[0];
    cplx dp = cplx(0.0);
    double e = std::abs(c[0]) * 0.5;
    for (std::size_t i = 1; i < c.size(); ++i) {
        dp = dp * z + p;
        p = p * z + c[i];
        e = e * az + std::abs(p);
    }
    const double eps = std::numeric_limits<double>::epsilon();
    return {p, dp, 4.0 * eps * (2.0 * e - std::abs(p))};
}

/// Aberth-Ehrlich simultaneous iteration on a monic polynomial
/// (descending coefficients, c[0] == 1, c.back() != 0).
inline std::vector<cplx> aberth(const std::vector<cplx>& c) {
    const int d = static_cast<int>(c.size()) - 1;
    // Initial guesses on a circle through the geometric mean of root
    // magnitudes, angles offset to break conjugate symmetry.
    const double rgeo = std::pow(std::abs(c.back()), 1.0 / d);
    double cauchy = 0.0;
    for (std::size_t i = 1; i < c.size(); ++i) cauchy = std::max(cauchy, std::abs(c[i]));
    cauchy += 1.0;
    const double r0 = std::min(std::max(rgeo, 1e-8), cauchy);

    std::vector<cplx> z(static_cast<std::size_t>(d));
    for (int k = 0; k < d; ++k) {
        const double th = 2.0 * std::numbers::pi * k / d + 0.4 / d + 0.7;
        z[static_cast<std::size_t>(k)] = r0 * cplx(std::cos(th), std::sin(th));
    }

    std::vector<bool> frozen(static_cast<std::size_t>(d), false);
    const int max_iter = 400;
    for (int iter = 0; iter < max_iter; ++iter) {
        bool all_done = true;
        for (int i = 0; i < d; ++i) {
            if (frozen[static_cast<std::size_t>(i)]) continue;
            const HornerResult h = horner_full(c, z[static_cast<std::size_t>(i)]);
            if (std::abs(h.value) <= h.errbound) {
                frozen[static_cast<std::size_t>(i)] = true;
                continue;
            }
            cplx ratio;
            if (h.deriv == cplx(0.0)) {
                // Stationary point of p: nudge off it.
                z[static_cast<std::size_t>(i)] += cplx(1e-8 * (1.0 + std::abs(z[static_cast<std::size_t>(i)])), 1e-8);
                all_done = false;
                continue;
            }
            ratio = h.value / h.deriv;
            cplx repulsion = cplx(0.0);
            for (int j = 0; j < d; ++j) {
                if (j == i) continue;
                const cplx diff = z[static_cast<std::size_t>(i)] - z[static_cast<std::size_t>(j)];
                if (diff == cplx(0.0)) continue;
                repulsion += cplx(1.0) / diff;
            }
            const cplx denom = cplx(1.0) - ratio * repulsion;
            const cplx step = (denom == cplx(0.0)) ? ratio : ratio / denom;
            z[static_cast<std::size_t>(i)] -= step;
            if (std::abs(step) > 1e-14 * (1.0 + std::abs(z[static_cast<std::size_t>(i)]))) all_done = false;
        }
        if (all_done) break;
    }

    // A few guarded Newton polish steps per root.
    for (int i = 0; i < d; ++i) {
        cplx zi = z[static_cast<std::size_t>(i)];
        HornerResult h = horner_full(c, zi);
        for (int step = 0; step < 3; ++step) {
            if (h.deriv == cplx(0.0) || std::abs(h.value) <= h.errbound) break;
            const cplx cand = zi - h.value / h.deriv;
            const HornerResult hc = horner_full(c, cand);
            if (std::abs(hc.value) >= std::abs(h.value)) break;
            zi = cand;
            h = hc;
        }
        z[static_cast<std::size_t>(i)] = zi;
    }
    return z;
}

inline void check_residual_contract(const ComplexPoly& p, const std::vector<cplx>& roots, double tol_residual) {
    const double maxc = p.max_coeff_magnitude();
    const int d = p.degree();
    for (const cplx& r : roots) {
        const double bound = tol_residual * maxc * std::pow(std::max(1.0, std::abs(r)), d);
        const double res = std::abs(p.eval(r));
        if (!(res <= bound))
            throw NumericalError("poly_roots: residual " + std::to_string(res) + " exceeds contract bound " +
                                 std::to_string(bound));
    }
}

/// Splits off exact zero roots and returns the monic reduced coefficients.
inline std::vector<cplx> monic_deflated(const ComplexPoly& p, int& n_zero_roots) {
    std::vector<cplx> c = p.coeffs();
    n_zero_roots = 0;
    while (c.size() > 1 && std::abs(c.back()) == 0.0) {
        c.pop_back();
        ++n_zero_roots;
    }
    const cplx lead = c.front();
    for (cplx& x : c) x /= lead;
    return c;
}

}  // namespace detail

/// Roots with multiplicity via Aberth-Ehrlich iteration. Every returned root
/// satisfies |p(r)| <= tol_residual * max|coeffs| * max(1,|r|)^degree.
inline std::vector<cplx> poly_roots(const ComplexPoly& p, double tol_residual = kTolResidual) {
    if (p.is_zero() || p.degree() < 1) throw ValidationError("poly_roots: no roots defined");
    int n_zero = 0;
    std::vector<cplx> c = detail::monic_deflated(p, n_zero);
    std::vector<cplx> roots(static_cast<std::size_t>(n_zero), cplx(0.0));
    const int d = static_cast<int>(c.size()) - 1;
    if (d == 1) {
        roots.push_back(-c[1]);
    } else if (d == 2) {
        // Monic quadratic, cancellation-safe branch choice.
        const cplx b = c[1], q0 = c[2];
        const cplx sq = std::sqrt(b * b - 4.0 * q0);
        const cplx u = (std::abs(b - sq) > std::abs(b + sq)) ? (b - sq) : (b + sq);
        if (u == cplx(0.0)) {
            roots.push_back(cplx(0.0));
            roots.push_back(cplx(0.0));
        } else {
            roots.push_back(-u / 2.0);
            roots.push_back(-2.0 * q0 / u);
        }
    } else if (d >= 3) {
        const std::vector<cplx> z = detail::aberth(c);
        roots.insert(roots.end(), z.begin(), z.end());
    }
    detail::check_residual_contract(p, roots, tol_residual);
    return roots;
}

/// Independent verification route: eigenvalues of the companion matrix.
/// The variable is rescaled by the geometric-mean root radius first; the
/// raw companion matrix of a wide-dynamic-range polynomial is unbalanced
/// enough to cost several digits.
inline std::vector<cplx> poly_roots_companion(const ComplexPoly& p, double tol_residual = kTolResidual) {
    if (p.is_zero() || p.degree() < 1) throw ValidationError("poly_roots: no roots defined");
    int n_zero = 0;
    std::vector<cplx> c = detail::monic_deflated(p, n_zero);
    std::vector<cplx> roots(static_cast<std::size_t>(n_zero), cplx(0.0));
    const int d = static_cast<int>(c.size()) - 1;
    if (d >= 1) {
        double gamma = std::pow(std::abs(c.back()), 1.0 / d);
        gamma = std::clamp(gamma, 1e-8, 1e8);
        double gk = 1.0;
        for (int k = 0; k <= d; ++k) {
            c[static_cast<std::size_t>(k)] /= gk;
            gk *= gamma;
        }
        Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
        for (int i = 1; i < d; ++i) m(i, i - 1) = cplx(1.0);
        for (int i = 0; i < d; ++i) m(i, d - 1) = -c[static_cast<std::size_t>(d - i)];
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(m, /*computeEigenvectors=*/false);
        for (int i = 0; i < d; ++i) roots.push_back(es.eigenvalues()(i) * gamma);
    }
    detail::check_residual_contract(p, roots, tol_residual);
    return roots;
}

/// Deterministic ordering for reports: by real part, then imaginary part.
inline void sort_roots(std::vector<cplx>& roots) {
    std::sort(roots.begin(), roots.end(), [](const cplx& a, const cplx& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
}

}  // namespace cycrir
