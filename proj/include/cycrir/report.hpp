#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cycrir/bounds.hpp"
#include "cycrir/textio.hpp"

namespace cycrir {

struct ReportOptions {
    double tol_axis = kTolAxis;
    double tol_cancel = kTolCancel;
    double margin_req = kMarginReq;
    double rho_bisect_tol = kRhoBisectTol;
    int a_grid_count = 200;
    int rho_c_angles = 720;
    bool with_upper = true;
    bool with_rho_c = true;
    int parallelism = 1;
};

/// Everything cmd_rir emits: the nominal classification, every computed
/// radius, the mode bookkeeping, and the named discrepancies.
struct RirReport {
    int n = 0;
    double mu = 0.0;
    std::vector<double> h_num;
    std::vector<double> h_den;
    StabilityReport nominal;
    double rho_p = 0.0;
    std::optional<double> rho_plus;
    std::vector<int> unstable_indices;
    std::vector<int> marginal_indices;
    std::optional<double> closed_form_first_order;
    std::optional<double> norm_based_first_order;
    std::optional<bool> agree;
    std::optional<double> rho_upper_homogeneous;
    std::optional<double> rho_c_estimate_value;
    std::vector<std::string> consistency_flags;
    ReportOptions options;
    std::int64_t runtime_ms = 0;
};

inline RirReport compute_rir_report(const CyclicNetwork& net, const ReportOptions& opts = {}) {
    const auto t0 = std::chrono::steady_clock::now();
    RirReport rep;
    rep.options = opts;
    rep.n = net.n;
    rep.mu = net.mu;
    rep.h_num = net.h.num().real_coeffs();
    rep.h_den = net.h.den().real_coeffs();

    const ModalSet ms = modal_set(net, opts.tol_axis, opts.tol_cancel);
    rep.nominal = nominal_roots(net, opts.tol_axis);
    rep.unstable_indices = ms.unstable_indices;
    rep.marginal_indices = ms.marginal_indices;

    const std::vector<double> inv = modal_inverse_norms(ms, opts.tol_axis);
    rep.rho_p = *std::min_element(inv.begin(), inv.end());

    const bool strictly = rep.nominal.classification == StabilityClass::strictly_unstable &&
                          !ms.unstable_indices.empty();
    if (strictly) {
        double v = 0.0;
        for (int k : ms.unstable_indices) v = std::max(v, inv[static_cast<std::size_t>(k - 1)]);
        rep.rho_plus = v;
    } else {
        rep.consistency_flags.push_back(
            "network not strictly unstable; rho_plus, rho_upper_homogeneous and rho_c_estimate undefined");
    }

    if (!ms.marginal_indices.empty()) {
        std::string flag = "marginal modes present: k =";
        for (int k : ms.marginal_indices) flag += " " + std::to_string(k);
        rep.consistency_flags.push_back(flag);
    }

    if (const auto fo = as_first_order(net.h)) {
        const double cosv = std::cos(std::numbers::pi / net.n);
        const bool literal_test = fo->gain < net.mu * cosv;
        const bool root_test = fo->gain * net.mu * cosv > 1.0;
        if (literal_test != root_test) {
            rep.consistency_flags.push_back(
                std::string("first-order instability predicates disagree: literal test (K < mu cos(pi/n)) = ") +
                (literal_test ? "true" : "false") + ", root test (K mu cos(pi/n) > 1) = " +
                (root_test ? "true" : "false") + "; the root test gates");
        }
        if (root_test) {
            const FirstOrderExact fe = rho_exact_first_order(fo->gain, fo->time_const, net.mu, net.n, opts.tol_axis);
            rep.closed_form_first_order = fe.closed_form;
            rep.norm_based_first_order = fe.norm_based;
            rep.agree = fe.agree;
            if (fe.closed_form <= 0.0)
                rep.consistency_flags.push_back("closed_form_first_order is nonpositive: " + format_short(fe.closed_form));
            if (!fe.agree)
                rep.consistency_flags.push_back("closed_form_first_order (" + format_short(fe.closed_form) +
                                                ") and norm_based_first_order (" + format_short(fe.norm_based) +
                                                ") disagree; both reported, neither assumed exact");
        }
    }

    if (strictly && opts.with_upper) {
        Bracket bracket;
        bracket.lo = *rep.rho_plus;
        bracket.hi = std::max(1.0 - 1e-9, bracket.lo * 1.001 + 1e-6);
        SearchOptions sopts;
        sopts.margin_req = opts.margin_req;
        sopts.bisect_tol = opts.rho_bisect_tol;
        sopts.tol_axis = opts.tol_axis;
        sopts.tol_cancel = opts.tol_cancel;
        sopts.parallelism = opts.parallelism;
        const auto cand = search_stabilizer_allpass(net, bracket, default_a_grid(net, opts.a_grid_count, opts.tol_axis), sopts);
        if (cand && cand->verified) {
            rep.rho_upper_homogeneous = cand->rho;
            if (rep.norm_based_first_order && rep.closed_form_first_order) {
                const double rh = cand->rho, nb = *rep.norm_based_first_order, cf = *rep.closed_form_first_order;
                rep.consistency_flags.push_back(
                    "verified stabilizer rho_hat = " + format_short(rh) + ": " +
                    (rh >= nb ? "above" : "below") + " norm_based_first_order by " + format_short(rh - nb) + ", " +
                    (rh >= cf ? "above" : "below") + " closed_form_first_order by " + format_short(rh - cf));
            }
        } else {
            rep.consistency_flags.push_back("no verified homogeneous stabilizer found in bracket [" +
                                            format_short(bracket.lo) + ", " + format_short(bracket.hi) + "]");
        }
    }

    if (strictly && opts.with_rho_c) {
        RhoCOptions copts;
        copts.angle_count = opts.rho_c_angles;
        copts.tol_axis = opts.tol_axis;
        copts.parallelism = opts.parallelism;
        rep.rho_c_estimate_value = rho_c_estimate(net, /*per_mode=*/true, copts);
    }

    if (rep.rho_plus) {
        if (rep.rho_p > *rep.rho_plus + 1e-9)
            rep.consistency_flags.push_back("ordering violation: rho_p > rho_plus");
        if (rep.rho_upper_homogeneous && *rep.rho_plus > *rep.rho_upper_homogeneous + 1e-6)
            rep.consistency_flags.push_back("ordering violation: rho_plus > rho_upper_homogeneous");
        if (rep.rho_c_estimate_value && *rep.rho_plus > *rep.rho_c_estimate_value + 1e-6)
            rep.consistency_flags.push_back("ordering violation: rho_plus > rho_c_estimate");
    }

    rep.runtime_ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

inline nlohmann::ordered_json roots_to_json(const std::vector<cplx>& roots) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const cplx& r : roots) {
        nlohmann::ordered_json item;
        item["re"] = r.real();
        item["im"] = r.imag();
        arr.push_back(item);
    }
    return arr;
}

inline nlohmann::ordered_json to_json(const RirReport& rep) {
    nlohmann::ordered_json j;
    j["n"] = rep.n;
    j["mu"] = rep.mu;
    j["h"] = nlohmann::ordered_json{{"num", rep.h_num}, {"den", rep.h_den}};
    nlohmann::ordered_json nominal;
    nominal["classification"] = to_string(rep.nominal.classification);
    nominal["roots"] = roots_to_json(rep.nominal.roots);
    nominal["margin"] = rep.nominal.stability_margin;
    j["nominal"] = nominal;
    j["rho_p"] = rep.rho_p;
    j["rho_plus"] = rep.rho_plus ? nlohmann::ordered_json(*rep.rho_plus) : nlohmann::ordered_json(nullptr);
    j["unstable_indices"] = rep.unstable_indices;
    j["marginal_indices"] = rep.marginal_indices;
    j["closed_form_first_order"] =
        rep.closed_form_first_order ? nlohmann::ordered_json(*rep.closed_form_first_order) : nlohmann::ordered_json(nullptr);
    j["norm_based_first_order"] =
        rep.norm_based_first_order ? nlohmann::ordered_json(*rep.norm_based_first_order) : nlohmann::ordered_json(nullptr);
    j["agree"] = rep.agree ? nlohmann::ordered_json(*rep.agree) : nlohmann::ordered_json(nullptr);
    j["rho_upper_homogeneous"] =
        rep.rho_upper_homogeneous ? nlohmann::ordered_json(*rep.rho_upper_homogeneous) : nlohmann::ordered_json(nullptr);
    j["rho_c_estimate"] =
        rep.rho_c_estimate_value ? nlohmann::ordered_json(*rep.rho_c_estimate_value) : nlohmann::ordered_json(nullptr);
    j["consistency_flags"] = rep.consistency_flags;
    j["tolerances"] = nlohmann::ordered_json{{"tol_axis", rep.options.tol_axis},
                                             {"tol_cancel", rep.options.tol_cancel},
                                             {"tol_residual", kTolResidual},
                                             {"tol_coeff_rel", kTolCoeffRel},
                                             {"margin_req", rep.options.margin_req},
                                             {"rho_bisect_tol", rep.options.rho_bisect_tol}};
    j["runtime_ms"] = rep.runtime_ms;
    return j;
}

inline nlohmann::ordered_json to_json(const VerifyVerdict& v) {
    nlohmann::ordered_json j;
    j["stabilizes"] = v.stabilizes;
    j["max_root_real_part"] = v.max_root_real_part;
    j["norms"] = v.norms;
    j["max_norm"] = v.max_norm;
    return j;
}

}  // namespace cycrir
