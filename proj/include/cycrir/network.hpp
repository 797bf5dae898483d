#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

#include "cycrir/norms.hpp"

namespace cycrir {

/// n identical agents h(s) in a single negative-feedback ring with per-link
/// gain mu. h must be real, proper and stable; n odd; mu > 0.
struct CyclicNetwork {
    int n;
    double mu;
    RationalFn h;

    CyclicNetwork(int n_, double mu_, RationalFn h_, double tol_axis = kTolAxis)
        : n(n_), mu(mu_), h(std::move(h_)) {
        if (n < 3 || n % 2 == 0) throw ValidationError("CyclicNetwork: n must be odd and >= 3");
        if (!(mu > 0.0)) throw ValidationError("CyclicNetwork: mu must be positive");
        if (!h.is_real()) throw ValidationError("CyclicNetwork: h must have real coefficients");
        if (!h.is_proper()) throw ValidationError("CyclicNetwork: h must be proper");
        if (h.num().is_zero()) throw ValidationError("CyclicNetwork: h must be nonzero");
        if (!is_stable_rational(h, tol_axis)) throw ValidationError("CyclicNetwork: h must be stable");
    }
};

/// Diagonal of n stable real proper perturbations; norm is the largest
/// per-channel H-infinity norm.
struct DiagPerturbation {
    std::vector<RationalFn> deltas;
    double norm = 0.0;

    explicit DiagPerturbation(std::vector<RationalFn> ds, double tol_axis = kTolAxis) : deltas(std::move(ds)) {
        if (deltas.empty()) throw ValidationError("DiagPerturbation: empty perturbation list");
        for (const RationalFn& d : deltas) norm = std::max(norm, validate_channel(d, tol_axis));
    }

    static DiagPerturbation broadcast(const RationalFn& d, int n, double tol_axis = kTolAxis) {
        DiagPerturbation p(private_tag{});
        p.norm = validate_channel(d, tol_axis);
        p.deltas.assign(static_cast<std::size_t>(n), d);
        return p;
    }

private:
    struct private_tag {};
    explicit DiagPerturbation(private_tag) {}

    static double validate_channel(const RationalFn& d, double tol_axis) {
        if (!d.is_real()) throw ValidationError("perturbation not in RH-infinity: complex coefficients");
        if (!d.is_proper()) throw ValidationError("perturbation not in RH-infinity: improper");
        if (!is_stable_rational(d, tol_axis)) throw ValidationError("perturbation not in RH-infinity: unstable");
        return hinf_norm(d, tol_axis);
    }
};

/// Circulant eigenvalues, modal subsystems g_k and the index set of modes
/// whose g_k is strictly unstable. Marginal modes (axis poles, no open-RHP
/// poles) are listed separately. Indices are 1-based.
struct ModalSet {
    std::vector<cplx> lambdas;
    std::vector<RationalFn> subsystems;
    std::vector<int> unstable_indices;
    std::vector<int> marginal_indices;
};

/// The ring interconnection matrix: -mu on the subdiagonal and in the
/// top-right corner.
inline Eigen::MatrixXd build_interconnection(const CyclicNetwork& net) {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(net.n, net.n);
    a(0, net.n - 1) = -net.mu;
    for (int i = 1; i < net.n; ++i) a(i, i - 1) = -net.mu;
    return a;
}

/// lambda_k = mu * exp(j(2k-1)pi/n) for k = 1..n; the eigenvalues of the
/// ring matrix, equivalently the roots of s^n + mu^n.
inline std::vector<cplx> circulant_eigenvalues(int n, double mu) {
    if (n < 1 || n % 2 == 0) throw ValidationError("circulant_eigenvalues: n must be odd");
    if (!(mu > 0.0)) throw ValidationError("circulant_eigenvalues: mu must be positive");
    std::vector<cplx> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int k = 1; k <= n; ++k) {
        const double th = (2.0 * k - 1.0) * std::numbers::pi / n;
        out.push_back(mu * cplx(std::cos(th), std::sin(th)));
    }
    return out;
}

/// g(s) = lambda h / (1 - lambda h) = lambda num_h / (den_h - lambda num_h).
inline RationalFn modal_subsystem(const RationalFn& h, cplx lambda, double tol_cancel = kTolCancel) {
    const ComplexPoly num = h.num() * lambda;
    const ComplexPoly den = h.den() - num;
    if (den.is_zero()) throw PreconditionError("modal_subsystem: 1 - lambda*h is identically zero");
    try {
        return RationalFn(num, den, tol_cancel);
    } catch (const NumericalError&) {
        throw NumericalError("modal_subsystem: unreliable modal subsystem (near cancellation)");
    }
}

inline ModalSet modal_set(const CyclicNetwork& net, double tol_axis = kTolAxis, double tol_cancel = kTolCancel) {
    ModalSet ms;
    ms.lambdas = circulant_eigenvalues(net.n, net.mu);
    ms.subsystems.reserve(ms.lambdas.size());
    for (int k = 1; k <= net.n; ++k) {
        const RationalFn g = modal_subsystem(net.h, ms.lambdas[static_cast<std::size_t>(k - 1)], tol_cancel);
        if (g.den().degree() >= 1) {
            const StabilityReport rep = classify_stability(g.den(), tol_axis);
            if (rep.classification == StabilityClass::strictly_unstable) ms.unstable_indices.push_back(k);
            else if (rep.classification == StabilityClass::marginal) ms.marginal_indices.push_back(k);
        }
        ms.subsystems.push_back(g);
    }
    return ms;
}

namespace detail {

/// Numerator polynomial of 1 + mu^n h^n prod(1 + delta_i) over the common
/// denominator den_h^n * prod(den_i).
inline ComplexPoly assemble_characteristic(const CyclicNetwork& net, const DiagPerturbation* delta) {
    const ComplexPoly dh_n = poly_pow(net.h.den(), net.n);
    const ComplexPoly nh_n = poly_pow(net.h.num(), net.n);
    ComplexPoly prod_dens({1.0});
    ComplexPoly prod_sums({1.0});
    if (delta != nullptr) {
        for (const RationalFn& d : delta->deltas) {
            prod_dens = prod_dens * d.den();
            prod_sums = prod_sums * (d.den() + d.num());
        }
    }
    const double mu_n = std::pow(net.mu, net.n);
    return dh_n * prod_dens + cplx(mu_n) * (nh_n * prod_sums);
}

inline std::vector<cplx> common_denominator_roots(const CyclicNetwork& net, const DiagPerturbation* delta) {
    std::vector<cplx> out;
    if (net.h.den().degree() >= 1)
        for (const cplx& r : poly_roots(net.h.den())) out.push_back(r);
    if (delta != nullptr)
        for (const RationalFn& d : delta->deltas)
            if (d.den().degree() >= 1)
                for (const cplx& r : poly_roots(d.den())) out.push_back(r);
    return out;
}

}  // namespace detail

struct CharacteristicResult {
    ComplexPoly poly;
    std::vector<cplx> roots;
};

/// Characteristic polynomial and its roots in one pass (the roots are needed
/// anyway for the cancellation check against the common denominator).
inline CharacteristicResult characteristic_roots(const CyclicNetwork& net, const DiagPerturbation* delta = nullptr,
                                                 double tol_cancel = kTolCancel) {
    if (delta != nullptr && static_cast<int>(delta->deltas.size()) != net.n)
        throw ValidationError("characteristic_poly: perturbation length differs from n");
    CharacteristicResult res;
    res.poly = detail::assemble_characteristic(net, delta);
    if (res.poly.is_zero() || res.poly.degree() < 1)
        throw NumericalError("characteristic_poly: degenerate characteristic polynomial");
    res.roots = poly_roots(res.poly);
    // A root of P on top of a common-denominator root makes the closed loop
    // indeterminate. Checked two ways. First, computed-root distance (sharp
    // for simple roots). Second, structurally: at a common-denominator root
    // q the first assembly term vanishes by construction, so P(q) equals
    // mu^n nh(q)^n prod(den_i + num_i)(q); P(q) ~ 0 exactly when a zero of h
    // or a zero of some 1 + delta_i sits on q. Factor roots are low degree
    // and accurate, unlike evaluating the expanded P at q.
    std::vector<cplx> second_term_zeros;
    if (net.h.num().degree() >= 1)
        for (const cplx& z : poly_roots(net.h.num())) second_term_zeros.push_back(z);
    if (delta != nullptr) {
        for (const RationalFn& d : delta->deltas) {
            const ComplexPoly one_plus = d.den() + d.num();
            if (one_plus.degree() >= 1)
                for (const cplx& z : poly_roots(one_plus)) second_term_zeros.push_back(z);
        }
    }
    for (const cplx& q : detail::common_denominator_roots(net, delta)) {
        for (const cplx& r : res.roots)
            if (std::abs(r - q) <= tol_cancel)
                throw NumericalError(
                    "characteristic_poly: indeterminate characteristic polynomial (root cancels common denominator)");
        for (const cplx& z : second_term_zeros)
            if (std::abs(z - q) <= tol_cancel)
                throw NumericalError(
                    "characteristic_poly: indeterminate characteristic polynomial (vanishes at a common denominator root)");
    }
    return res;
}

inline ComplexPoly characteristic_poly(const CyclicNetwork& net, const DiagPerturbation* delta = nullptr,
                                       double tol_cancel = kTolCancel) {
    return characteristic_roots(net, delta, tol_cancel).poly;
}

/// h = K/(tau s + 1) up to denominator scaling.
struct FirstOrderParams {
    double gain;        // K
    double time_const;  // tau
};

inline std::optional<FirstOrderParams> as_first_order(const RationalFn& h) {
    if (h.num().is_zero() || h.num().degree() != 0 || h.den().degree() != 1) return std::nullopt;
    if (!h.is_real()) return std::nullopt;
    const double d0 = h.den().coeffs()[0].real();
    const double d1 = h.den().coeffs()[1].real();
    const double n0 = h.num().coeffs()[0].real();
    if (d1 == 0.0) return std::nullopt;
    return FirstOrderParams{n0 / d1, d0 / d1};
}

/// Stability report of the unperturbed network. For first-order h the roots
/// are cross-checked against the analytic set (lambda_k K - 1)/tau.
inline StabilityReport nominal_roots(const CyclicNetwork& net, double tol_axis = kTolAxis) {
    const CharacteristicResult cr = characteristic_roots(net);
    if (const auto fo = as_first_order(net.h)) {
        std::vector<cplx> expected;
        for (const cplx& lam : circulant_eigenvalues(net.n, net.mu))
            expected.push_back((lam * fo->gain - 1.0) / fo->time_const);
        std::vector<cplx> actual = cr.roots;
        double scale = 0.0;
        for (const cplx& e : expected) scale = std::max(scale, std::abs(e));
        for (const cplx& e : expected) {
            double bestd = std::numeric_limits<double>::infinity();
            std::size_t besti = 0;
            for (std::size_t i = 0; i < actual.size(); ++i) {
                const double d = std::abs(actual[i] - e);
                if (d < bestd) {
                    bestd = d;
                    besti = i;
                }
            }
            if (!(bestd <= 1e-7 * std::max(1.0, scale)))
                throw NumericalError("nominal_roots: analytic first-order cross-check failed");
            actual.erase(actual.begin() + static_cast<std::ptrdiff_t>(besti));
        }
    }
    return classify_roots(cr.roots, tol_axis);
}

}  // namespace cycrir
