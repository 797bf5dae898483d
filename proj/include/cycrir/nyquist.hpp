#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>
#include <utility>
#include <vector>

#include "cycrir/network.hpp"

namespace cycrir {

/// Strictly increasing, finite frequencies in rad/s.
struct FrequencyGrid {
    std::vector<double> omegas;

    explicit FrequencyGrid(std::vector<double> ws) : omegas(std::move(ws)) {
        for (std::size_t i = 0; i < omegas.size(); ++i) {
            if (!std::isfinite(omegas[i])) throw ValidationError("FrequencyGrid: non-finite frequency");
            if (i > 0 && !(omegas[i] > omegas[i - 1]))
                throw ValidationError("FrequencyGrid: frequencies must be strictly increasing");
        }
    }

    static FrequencyGrid log_spaced(double lo, double hi, int count, bool include_zero) {
        if (!(lo > 0.0) || !(hi > lo) || count < 2) throw ValidationError("FrequencyGrid: bad log_spaced arguments");
        std::vector<double> ws;
        ws.reserve(static_cast<std::size_t>(count) + 1);
        if (include_zero) ws.push_back(0.0);
        const double llo = std::log(lo), lhi = std::log(hi);
        for (int i = 0; i < count; ++i) ws.push_back(std::exp(llo + (lhi - llo) * i / (count - 1)));
        return FrequencyGrid(std::move(ws));
    }

    /// 2001 points over [1e-3, 1e3] rad/s plus omega = 0.
    static FrequencyGrid standard() { return log_spaced(1e-3, 1e3, 2001, true); }
};

/// phi(jw) = 1/h(jw) sampled on the grid. An imaginary-axis zero of h makes
/// phi undefined there and is rejected up front, naming the frequency.
inline std::vector<std::pair<double, cplx>> inverse_nyquist_curve(const RationalFn& h, const FrequencyGrid& grid,
                                                                  double tol_axis = kTolAxis) {
    if (h.num().is_zero()) throw ValidationError("inverse_nyquist_curve: h is the zero function");
    if (h.num().degree() >= 1) {
        for (const cplx& z : poly_roots(h.num()))
            if (std::abs(z.real()) <= tol_axis) {
                std::ostringstream os;
                os << "inverse_nyquist_curve: zero of h on the imaginary axis at omega = " << z.imag();
                throw PreconditionError(os.str());
            }
    }
    std::vector<std::pair<double, cplx>> out;
    out.reserve(grid.omegas.size());
    for (double w : grid.omegas) {
        const cplx s(0.0, w);
        out.emplace_back(w, h.den().eval(s) / h.num().eval(s));
    }
    return out;
}

/// Value set of phi under the disk perturbation: per frequency, the center
/// phi(jw) and the trace phi(jw)/(1 + rho e^{j alpha}) over an alpha grid.
struct ValueSetBand {
    double rho = 0.0;
    int alphas = 0;
    std::vector<double> omegas;
    std::vector<cplx> centers;
    std::vector<std::vector<cplx>> boundaries;
};

inline ValueSetBand value_set_band(const RationalFn& h, double rho, const FrequencyGrid& grid, int alphas = 256,
                                   double tol_axis = kTolAxis) {
    if (!(rho > 0.0 && rho < 1.0)) throw ValidationError("value_set_band: rho must lie in (0,1)");
    if (alphas < 1) throw ValidationError("value_set_band: need at least one alpha sample");
    const auto curve = inverse_nyquist_curve(h, grid, tol_axis);
    ValueSetBand band;
    band.rho = rho;
    band.alphas = alphas;
    band.omegas.reserve(curve.size());
    band.centers.reserve(curve.size());
    band.boundaries.reserve(curve.size());
    for (const auto& [w, phi] : curve) {
        band.omegas.push_back(w);
        band.centers.push_back(phi);
        std::vector<cplx> ring;
        ring.reserve(static_cast<std::size_t>(alphas));
        for (int i = 0; i < alphas; ++i) {
            const double alpha = 2.0 * std::numbers::pi * i / alphas;
            ring.push_back(phi / (cplx(1.0) + rho * cplx(std::cos(alpha), std::sin(alpha))));
        }
        band.boundaries.push_back(std::move(ring));
    }
    return band;
}

inline std::vector<cplx> eigen_markers(int n, double mu) { return circulant_eigenvalues(n, mu); }

/// True iff |phi| is nondecreasing along the samples with omega > 0
/// (tolerance 1e-12 per step). Diagnostic only.
inline bool monotone_gain_check(const std::vector<std::pair<double, cplx>>& phi_samples) {
    double prev = -std::numeric_limits<double>::infinity();
    for (const auto& [w, phi] : phi_samples) {
        if (!(w > 0.0)) continue;
        const double mag = std::abs(phi);
        if (mag < prev - 1e-12) return false;
        prev = mag;
    }
    return true;
}

/// Smallest nonnegative frequency with |phi(jw)| = level, i.e. |h(jw)| =
/// 1/level. Surrogate for the crossing of the unperturbed inverse Nyquist
/// curve with the circle of radius `level`.
inline std::optional<double> gain_crossing_frequency(const RationalFn& h, double level) {
    if (!(level > 0.0)) throw ValidationError("gain_crossing_frequency: level must be positive");
    if (h.num().is_zero()) throw ValidationError("gain_crossing_frequency: h is the zero function");
    // |den(jw)|^2 - level^2 |num(jw)|^2 = 0 as a real polynomial in w.
    const ComplexPoly lhs = magnitude_squared_on_axis(h.den()) - cplx(level * level) * magnitude_squared_on_axis(h.num());
    if (lhs.is_zero() || lhs.degree() < 1) return std::nullopt;
    std::optional<double> best;
    for (const cplx& r : poly_roots(lhs)) {
        if (std::abs(r.imag()) > 1e-6 * (1.0 + std::abs(r.real()))) continue;
        const double w = r.real();
        if (w < -1e-9) continue;
        const double wc = std::max(w, 0.0);
        if (!best || wc < *best) best = wc;
    }
    return best;
}

}  // namespace cycrir
