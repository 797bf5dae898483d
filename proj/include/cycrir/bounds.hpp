#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <vector>

#include "cycrir/network.hpp"
#include "cycrir/parallel.hpp"

namespace cycrir {

/// Per-mode 1/||g_k|| with 1/inf mapped to 0, index k-1. Conjugate modes
/// share a norm, so only ceil(n/2) norms are computed.
inline std::vector<double> modal_inverse_norms(const ModalSet& ms, double tol_axis = kTolAxis) {
    const int n = static_cast<int>(ms.subsystems.size());
    std::vector<double> out(static_cast<std::size_t>(n), 0.0);
    for (int k = 1; k <= (n + 1) / 2; ++k) {
        const double norm = linf_norm(ms.subsystems[static_cast<std::size_t>(k - 1)], tol_axis);
        const double inv = std::isinf(norm) ? 0.0 : 1.0 / norm;
        out[static_cast<std::size_t>(k - 1)] = inv;
        out[static_cast<std::size_t>(n - k)] = inv;
    }
    return out;
}

/// Small-gain lower bound: min over all modes of 1/||g_i||.
inline double rho_p(const CyclicNetwork& net, double tol_axis = kTolAxis) {
    const std::vector<double> inv = modal_inverse_norms(modal_set(net, tol_axis), tol_axis);
    return *std::min_element(inv.begin(), inv.end());
}

struct RhoPlusResult {
    double value = 0.0;
    std::vector<int> unstable_indices;
    std::vector<int> marginal_indices;
};

/// max over strictly unstable modes of 1/||g_k||; defined only for strictly
/// unstable networks.
inline RhoPlusResult rho_plus(const CyclicNetwork& net, double tol_axis = kTolAxis) {
    const ModalSet ms = modal_set(net, tol_axis);
    const StabilityReport nominal = nominal_roots(net, tol_axis);
    if (nominal.classification != StabilityClass::strictly_unstable || ms.unstable_indices.empty())
        throw PreconditionError("network not strictly unstable; rho_plus undefined");
    const std::vector<double> inv = modal_inverse_norms(ms, tol_axis);
    RhoPlusResult res;
    res.unstable_indices = ms.unstable_indices;
    res.marginal_indices = ms.marginal_indices;
    for (int k : ms.unstable_indices) res.value = std::max(res.value, inv[static_cast<std::size_t>(k - 1)]);
    return res;
}

struct FirstOrderExact {
    double closed_form = 0.0;
    double norm_based = 0.0;
    bool agree = false;
};

/// The two first-order candidate values side by side: the literal closed
/// form 1 - K/(mu cos(pi/n)) and the numerically computed 1/||g_1||. They
/// differ for generic parameters; both are always returned.
inline FirstOrderExact rho_exact_first_order(double gain, double time_const, double mu, int n,
                                             double tol_axis = kTolAxis) {
    if (!(gain > 0.0) || !(time_const > 0.0)) throw ValidationError("rho_exact_first_order: K and tau must be positive");
    if (n < 3 || n % 2 == 0) throw ValidationError("rho_exact_first_order: n must be odd and >= 3");
    if (!(mu > 0.0)) throw ValidationError("rho_exact_first_order: mu must be positive");
    const double theta = std::numbers::pi / n;
    if (!(gain * mu * std::cos(theta) > 1.0))
        throw PreconditionError("rho_exact_first_order: network not strictly unstable by the root test");
    FirstOrderExact res;
    res.closed_form = 1.0 - gain / (mu * std::cos(theta));
    const RationalFn h(ComplexPoly({gain}), ComplexPoly({time_const, 1.0}));
    const cplx lambda1 = mu * cplx(std::cos(theta), std::sin(theta));
    const double norm = linf_norm(modal_subsystem(h, lambda1), tol_axis);
    res.norm_based = std::isinf(norm) ? 0.0 : 1.0 / norm;
    res.agree = std::abs(res.closed_form - res.norm_based) <= 1e-6 * std::max(1.0, res.closed_form);
    return res;
}

namespace detail {

inline cplx cplx_int_pow(cplx base, int k) {
    cplx result(1.0);
    while (k > 0) {
        if (k & 1) result *= base;
        base *= base;
        k >>= 1;
    }
    return result;
}

}  // namespace detail

/// The homogeneous equivalent of a heterogeneous tuple within the disk of
/// radius r: delta = exp(mean(log(1 + delta_i))) - 1 with the principal
/// branch. (1+delta)^n reproduces prod(1+delta_i) and |delta| <= r.
inline cplx homogenize(const std::vector<cplx>& deltas, double r) {
    if (deltas.empty()) throw ValidationError("homogenize: empty tuple");
    if (!(r > 0.0 && r < 1.0)) throw ValidationError("homogenize: outside lemma hypothesis (need 0 < r < 1)");
    for (const cplx& d : deltas)
        if (std::abs(d) > r) throw ValidationError("homogenize: outside lemma hypothesis (|delta_i| > r)");
    const int n = static_cast<int>(deltas.size());
    cplx mean(0.0);
    cplx product(1.0);
    double product_mag = 1.0;
    for (const cplx& d : deltas) {
        mean += std::log(cplx(1.0) + d);
        product *= cplx(1.0) + d;
        product_mag *= std::abs(cplx(1.0) + d);
    }
    mean /= static_cast<double>(n);
    const cplx delta = std::exp(mean) - cplx(1.0);
    const cplx lifted = detail::cplx_int_pow(cplx(1.0) + delta, n);
    if (std::abs(lifted - product) > 1e-12 * std::max(product_mag, 1e-300))
        throw NumericalError("homogenize: product identity drifted beyond 1e-12");
    if (std::abs(delta) > r + 1e-12) throw NumericalError("homogenize: result left the radius-r disk");
    return delta;
}

/// Log-disk convexity probe: with u, v in log(1 + disk_r), checks that the
/// segment point stays inside. Always true by convexity; exists to be
/// property-tested.
inline bool convexity_witness(cplx u, cplx v, double t, double r) {
    if (!(r > 0.0 && r < 1.0)) throw ValidationError("convexity_witness: need 0 < r < 1");
    if (!(t >= 0.0 && t <= 1.0)) throw ValidationError("convexity_witness: need t in [0,1]");
    if (std::abs(std::exp(u) - cplx(1.0)) > r + 1e-12 || std::abs(std::exp(v) - cplx(1.0)) > r + 1e-12)
        throw ValidationError("convexity_witness: endpoint outside log(1 + disk_r)");
    const cplx mix = t * u + (1.0 - t) * v;
    return std::abs(std::exp(mix) - cplx(1.0)) <= r + 1e-12;
}

/// One stabilizer family member: delta(s) = sign * rho * (s-a)/(s+a), or the
/// constant gain sign * rho when a is absent.
struct StabilizerCandidate {
    double rho = 0.0;
    std::optional<double> a;
    int sign = 1;
    bool verified = false;
    double stability_margin = 0.0;

    RationalFn realize() const {
        if (a) {
            const double k = sign * rho;
            return RationalFn(ComplexPoly({k, -k * (*a)}), ComplexPoly({1.0, *a}));
        }
        return RationalFn(ComplexPoly({sign * rho}), ComplexPoly({1.0}));
    }
};

struct Bracket {
    double lo = 0.0;
    double hi = 0.0;
};

struct SearchOptions {
    double margin_req = kMarginReq;
    double bisect_tol = kRhoBisectTol;
    double tol_axis = kTolAxis;
    double tol_cancel = kTolCancel;
    int scan_points = 16;  // descending feasibility scan per candidate shape
    int parallelism = 1;
};

/// Default pole/zero magnitude grid: log-spaced over [1e-3, 1e3] scaled by
/// the peak frequency of the dominant mode g_1.
inline std::vector<double> default_a_grid(const CyclicNetwork& net, int count = 200, double tol_axis = kTolAxis) {
    const std::vector<cplx> lambdas = circulant_eigenvalues(net.n, net.mu);
    const LinfResult lr = linf_norm_detailed(modal_subsystem(net.h, lambdas[0]), tol_axis);
    double scale = 1.0;
    if (std::isfinite(lr.omega_peak) && std::abs(lr.omega_peak) > 1e-12) scale = std::abs(lr.omega_peak);
    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(count));
    if (count == 1) {
        grid.push_back(scale);
        return grid;
    }
    const double lo = std::log(1e-3 * scale), hi = std::log(1e3 * scale);
    for (int i = 0; i < count; ++i) grid.push_back(std::exp(lo + (hi - lo) * i / (count - 1)));
    return grid;
}

namespace detail {

/// Max root real part of the perturbed characteristic polynomial, or nullopt
/// when assembly/rootfinding fails for this candidate.
inline std::optional<double> homogeneous_margin(const CyclicNetwork& net, const StabilizerCandidate& cand,
                                                const SearchOptions& opts, bool companion_route = false) {
    try {
        const DiagPerturbation delta = DiagPerturbation::broadcast(cand.realize(), net.n, opts.tol_axis);
        if (!companion_route) {
            const CharacteristicResult cr = characteristic_roots(net, &delta, opts.tol_cancel);
            double margin = -std::numeric_limits<double>::infinity();
            for (const cplx& r : cr.roots) margin = std::max(margin, r.real());
            return margin;
        }
        const ComplexPoly p = detail::assemble_characteristic(net, &delta);
        double margin = -std::numeric_limits<double>::infinity();
        for (const cplx& r : poly_roots_companion(p)) margin = std::max(margin, r.real());
        return margin;
    } catch (const Error&) {
        return std::nullopt;
    }
}

}  // namespace detail

/// Searches homogeneous all-pass (and constant-gain) perturbations for the
/// smallest verified stabilizer in the bracket. The returned rho upper-bounds
/// the homogeneous and dynamic RIRs. Candidates are bisected independently;
/// the reported optimum is deterministic under any parallelism degree
/// (tie-break: smaller rho, then smaller a with constants last, then
/// positive sign).
inline std::optional<StabilizerCandidate> search_stabilizer_allpass(const CyclicNetwork& net, Bracket bracket,
                                                                    const std::vector<double>& a_grid,
                                                                    const SearchOptions& opts = {}) {
    const StabilityReport nominal = nominal_roots(net, opts.tol_axis);
    if (nominal.classification != StabilityClass::strictly_unstable)
        throw PreconditionError("search_stabilizer_allpass: network not strictly unstable");
    const double floor = rho_plus(net, opts.tol_axis).value;
    if (bracket.lo < floor - 1e-12)
        throw PreconditionError("search_stabilizer_allpass: bracket extends below the modal lower bound rho_plus");
    if (!(bracket.hi > bracket.lo)) throw ValidationError("search_stabilizer_allpass: empty bracket");

    std::vector<StabilizerCandidate> shapes;
    for (int sign : {+1, -1}) {
        StabilizerCandidate c;
        c.sign = sign;
        shapes.push_back(c);  // constant gain
        for (double a : a_grid) {
            if (!(a > 0.0)) throw ValidationError("search_stabilizer_allpass: a_grid entries must be positive");
            c.a = a;
            shapes.push_back(c);
        }
    }

    // Stabilization is not monotone in rho for a fixed all-pass shape (the
    // feasible set can be an interior interval), so each shape gets a
    // descending scan to locate the lowest feasible point before bisecting
    // its lower edge.
    std::vector<std::optional<StabilizerCandidate>> found(shapes.size());
    parallel_for(static_cast<int>(shapes.size()), opts.parallelism, [&](int idx) {
        StabilizerCandidate cand = shapes[static_cast<std::size_t>(idx)];
        const auto feasible_margin = [&](double rho) -> std::optional<double> {
            cand.rho = rho;
            const std::optional<double> m = detail::homogeneous_margin(net, cand, opts);
            if (m && *m < -opts.margin_req) return m;
            return std::nullopt;
        };
        const int m = std::max(2, opts.scan_points);
        std::vector<double> grid(static_cast<std::size_t>(m));
        for (int j = 0; j < m; ++j) grid[static_cast<std::size_t>(j)] = bracket.hi - (bracket.hi - bracket.lo) * j / (m - 1);
        int lowest = -1;
        double lowest_margin = 0.0;
        for (int j = 0; j < m; ++j) {
            if (const std::optional<double> fm = feasible_margin(grid[static_cast<std::size_t>(j)])) {
                lowest = j;
                lowest_margin = *fm;
            }
        }
        if (lowest < 0) return;
        double hi = grid[static_cast<std::size_t>(lowest)], hi_margin = lowest_margin;
        double lo = (lowest + 1 < m) ? grid[static_cast<std::size_t>(lowest + 1)] : bracket.lo;
        while (hi - lo > opts.bisect_tol) {
            const double mid = 0.5 * (lo + hi);
            if (const std::optional<double> fm = feasible_margin(mid)) {
                hi = mid;
                hi_margin = *fm;
            } else {
                lo = mid;
            }
        }
        cand.rho = hi;
        cand.stability_margin = hi_margin;
        found[static_cast<std::size_t>(idx)] = cand;
    });

    std::vector<StabilizerCandidate> winners;
    for (const auto& f : found)
        if (f) winners.push_back(*f);
    if (winners.empty()) return std::nullopt;
    std::sort(winners.begin(), winners.end(), [](const StabilizerCandidate& x, const StabilizerCandidate& y) {
        if (x.rho != y.rho) return x.rho < y.rho;
        const double ax = x.a.value_or(std::numeric_limits<double>::infinity());
        const double ay = y.a.value_or(std::numeric_limits<double>::infinity());
        if (ax != ay) return ax < ay;
        return x.sign > y.sign;
    });

    // Soundness: the returned candidate must re-verify on the independent
    // companion route and realize its norm exactly.
    for (StabilizerCandidate& best : winners) {
        const std::optional<double> margin_c = detail::homogeneous_margin(net, best, opts, /*companion_route=*/true);
        if (!margin_c || !(*margin_c < -opts.margin_req)) continue;
        const double realized_norm = hinf_norm(best.realize(), opts.tol_axis);
        if (std::abs(realized_norm - best.rho) > 1e-9) continue;
        best.verified = true;
        return best;
    }
    return std::nullopt;
}

struct RhoCOptions {
    int angle_count = 720;
    double bisect_tol = 1e-5;
    double cap = 1.0 - 1e-9;
    double tol_axis = kTolAxis;
    int parallelism = 1;
    // Coarse per-channel grids for the n <= 5 heterogeneous brute force.
    int brute_mags_n3 = 6;
    int brute_phases_n3 = 12;
    int brute_mags_n5 = 2;
    int brute_phases_n5 = 5;
};

namespace detail {

/// All modal denominators den_h - lambda_k (1+delta) num_h Hurwitz?
inline bool complex_gain_stabilizes(const ComplexPoly& nh, const ComplexPoly& dh, const std::vector<cplx>& lambdas,
                                    cplx delta, double tol_axis) {
    for (const cplx& lam : lambdas) {
        const ComplexPoly den = dh - (lam * (cplx(1.0) + delta)) * nh;
        if (den.is_zero()) return false;
        if (den.degree() < 1) continue;
        try {
            for (const cplx& r : poly_roots(den))
                if (r.real() >= -tol_axis) return false;
        } catch (const Error&) {
            return false;
        }
    }
    return true;
}

inline double bisect_complex_gain(const ComplexPoly& nh, const ComplexPoly& dh, const std::vector<cplx>& lambdas,
                                  double theta, const RhoCOptions& opts) {
    const cplx dir(std::cos(theta), std::sin(theta));
    // Feasibility along the ray need not be monotone; scan down before
    // bisecting the lowest feasible edge.
    const int m = 16;
    int lowest = -1;
    for (int j = 0; j < m; ++j) {
        const double mag = opts.cap * (m - 1 - j) / (m - 1);
        if (mag == 0.0) break;
        if (complex_gain_stabilizes(nh, dh, lambdas, mag * dir, opts.tol_axis)) lowest = j;
    }
    if (lowest < 0) return std::numeric_limits<double>::infinity();
    double hi = opts.cap * (m - 1 - lowest) / (m - 1);
    double lo = opts.cap * std::max(0, m - 2 - lowest) / (m - 1);
    while (hi - lo > opts.bisect_tol) {
        const double mid = 0.5 * (lo + hi);
        if (complex_gain_stabilizes(nh, dh, lambdas, mid * dir, opts.tol_axis)) hi = mid;
        else lo = mid;
    }
    return hi;
}

}  // namespace detail

/// Estimate of the complex-parametric RIR. per_mode = true searches the
/// homogeneous complex gain delta over magnitude (bisection) x phase (grid,
/// plus one parabolic polish step on the best cell). per_mode = false
/// additionally runs a coarse brute force over independent per-channel
/// complex gains (n <= 5 only) and returns the smaller feasible value.
inline double rho_c_estimate(const CyclicNetwork& net, bool per_mode = true, const RhoCOptions& opts = {}) {
    if (!per_mode && net.n > 5) throw ValidationError("rho_c_estimate: brute force limited to n <= 5");
    const StabilityReport nominal = nominal_roots(net, opts.tol_axis);
    if (nominal.classification == StabilityClass::stable)
        throw PreconditionError("rho_c_estimate: network is nominally stable");

    const std::vector<cplx> lambdas = circulant_eigenvalues(net.n, net.mu);
    const ComplexPoly& nh = net.h.num();
    const ComplexPoly& dh = net.h.den();

    std::vector<double> fvals(static_cast<std::size_t>(opts.angle_count));
    parallel_for(opts.angle_count, opts.parallelism, [&](int i) {
        const double theta = 2.0 * std::numbers::pi * i / opts.angle_count;
        fvals[static_cast<std::size_t>(i)] = detail::bisect_complex_gain(nh, dh, lambdas, theta, opts);
    });
    int best = 0;
    for (int i = 1; i < opts.angle_count; ++i)
        if (fvals[static_cast<std::size_t>(i)] < fvals[static_cast<std::size_t>(best)]) best = i;
    double value = fvals[static_cast<std::size_t>(best)];
    if (std::isinf(value)) throw NumericalError("rho_c_estimate: no stabilizing complex gain found below the cap");

    // One parabolic polish step on the best cell.
    const double step = 2.0 * std::numbers::pi / opts.angle_count;
    const double fm = fvals[static_cast<std::size_t>((best + opts.angle_count - 1) % opts.angle_count)];
    const double fp = fvals[static_cast<std::size_t>((best + 1) % opts.angle_count)];
    if (std::isfinite(fm) && std::isfinite(fp)) {
        const double denom = fm - 2.0 * value + fp;
        if (std::abs(denom) > 1e-30) {
            const double shift = 0.5 * (fm - fp) / denom;
            if (std::abs(shift) <= 1.0) {
                const double theta_hat = 2.0 * std::numbers::pi * best / opts.angle_count + shift * step;
                value = std::min(value, detail::bisect_complex_gain(nh, dh, lambdas, theta_hat, opts));
            }
        }
    }

    if (!per_mode) {
        const int mags = net.n == 3 ? opts.brute_mags_n3 : opts.brute_mags_n5;
        const int phases = net.n == 3 ? opts.brute_phases_n3 : opts.brute_phases_n5;
        const int per_channel = 1 + mags * phases;  // cell 0 leaves the channel unperturbed
        const double mu_n = std::pow(net.mu, net.n);
        const ComplexPoly dh_n = poly_pow(dh, net.n);
        const ComplexPoly nh_n = poly_pow(nh, net.n);
        long total = 1;
        for (int i = 0; i < net.n; ++i) total *= per_channel;
        double brute = std::numeric_limits<double>::infinity();
        for (long code = 0; code < total; ++code) {
            long rest = code;
            cplx prod(1.0);
            double max_mag = 0.0;
            for (int ch = 0; ch < net.n; ++ch) {
                const int cell = static_cast<int>(rest % per_channel);
                rest /= per_channel;
                if (cell == 0) continue;
                const double mag = opts.cap * ((cell - 1) / phases + 1) / mags;
                const double ph = 2.0 * std::numbers::pi * ((cell - 1) % phases) / phases;
                prod *= cplx(1.0) + mag * cplx(std::cos(ph), std::sin(ph));
                max_mag = std::max(max_mag, mag);
            }
            if (max_mag >= brute) continue;
            const ComplexPoly p = dh_n + cplx(mu_n) * (nh_n * prod);
            if (p.is_zero() || p.degree() < 1) continue;
            bool hurwitz = true;
            try {
                for (const cplx& r : poly_roots(p))
                    if (r.real() >= -opts.tol_axis) {
                        hurwitz = false;
                        break;
                    }
            } catch (const Error&) {
                hurwitz = false;
            }
            if (hurwitz) brute = max_mag;
        }
        value = std::min(value, brute);
    }
    return value;
}

struct VerifyVerdict {
    bool stabilizes = false;
    double max_root_real_part = 0.0;
    std::vector<double> norms;
    double max_norm = 0.0;
};

/// Root test of the perturbed characteristic polynomial plus per-channel
/// H-infinity norms.
inline VerifyVerdict verify_perturbation(const CyclicNetwork& net, const DiagPerturbation& delta,
                                         double margin_req = kMarginReq, double tol_axis = kTolAxis,
                                         double tol_cancel = kTolCancel) {
    if (static_cast<int>(delta.deltas.size()) != net.n)
        throw ValidationError("verify_perturbation: perturbation length differs from n");
    const CharacteristicResult cr = characteristic_roots(net, &delta, tol_cancel);
    VerifyVerdict v;
    v.max_root_real_part = -std::numeric_limits<double>::infinity();
    for (const cplx& r : cr.roots) v.max_root_real_part = std::max(v.max_root_real_part, r.real());
    for (const RationalFn& d : delta.deltas) v.norms.push_back(hinf_norm(d, tol_axis));
    v.max_norm = delta.norm;
    v.stabilizes = v.max_root_real_part < -margin_req;
    return v;
}

}  // namespace cycrir
