// Command-line surface: RIR reports, sweeps over n, Nyquist/value-set CSVs,
// perturbation verification, and the homogenization map.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cycrir/cli_support.hpp"
#include "cycrir/nyquist.hpp"
#include "cycrir/parallel.hpp"
#include "cycrir/report.hpp"

namespace {

using namespace cycrir;

struct CommonOpts {
    double tol_axis = kTolAxis;
    double tol_cancel = kTolCancel;
    double margin_req = kMarginReq;
    double rho_bisect_tol = kRhoBisectTol;
    int a_grid = 200;
    int rho_c_angles = 720;
    bool skip_upper = false;
    bool skip_rho_c = false;
    std::string format;
    std::string out;
    int parallelism = 0;

    int workers() const { return parallelism > 0 ? parallelism : default_parallelism(); }

    void require_format(const std::string& expected, const std::string& cmd) const {
        if (!format.empty() && format != expected)
            throw ValidationError(cmd + " emits " + expected + "; --format " + format + " is not supported");
    }

    ReportOptions report_options() const {
        ReportOptions o;
        o.tol_axis = tol_axis;
        o.tol_cancel = tol_cancel;
        o.margin_req = margin_req;
        o.rho_bisect_tol = rho_bisect_tol;
        o.a_grid_count = a_grid;
        o.rho_c_angles = rho_c_angles;
        o.with_upper = !skip_upper;
        o.with_rho_c = !skip_rho_c;
        o.parallelism = workers();
        return o;
    }
};

void add_common(CLI::App* cmd, CommonOpts& c) {
    cmd->add_option("--tol-axis", c.tol_axis, "Axis band for stability classification");
    cmd->add_option("--tol-cancel", c.tol_cancel, "Pole/zero cancellation tolerance");
    cmd->add_option("--margin-req", c.margin_req, "Required stabilization margin");
    cmd->add_option("--rho-bisect-tol", c.rho_bisect_tol, "Bisection tolerance on rho");
    cmd->add_option("--a-grid", c.a_grid, "All-pass pole grid size for the stabilizer search");
    cmd->add_option("--rho-c-angles", c.rho_c_angles, "Phase grid size for the rho_c estimate");
    cmd->add_flag("--skip-upper", c.skip_upper, "Skip the homogeneous stabilizer search");
    cmd->add_flag("--skip-rho-c", c.skip_rho_c, "Skip the complex-parametric estimate");
    cmd->add_option("--format", c.format, "Output format: json or csv (fixed per subcommand)");
    cmd->add_option("--out", c.out, "Output path (default: stdout)");
    cmd->add_option("--parallelism", c.parallelism,
                    "Worker threads (default: CYCRIR_PARALLELISM env var, else hardware)");
}

struct PlantOpts {
    double gain = 0.0;
    double time_const = 0.0;
    std::string num;
    std::string den;
    bool first_order = false;

    // For subcommands that accept both styles.
    void resolve() {
        const bool has_fo = gain != 0.0 || time_const != 0.0;
        const bool has_gen = !num.empty() || !den.empty();
        if (has_fo == has_gen)
            throw ValidationError("provide either --K and --tau (first-order) or --num and --den (general)");
        first_order = has_fo;
    }

    RationalFn make_h(double tol_cancel) const {
        if (first_order) {
            if (!(gain > 0.0) || !(time_const > 0.0)) throw ValidationError("K and tau must be positive");
            return RationalFn(ComplexPoly({gain}), ComplexPoly({time_const, 1.0}), tol_cancel);
        }
        if (num.empty() || den.empty()) throw ValidationError("--num and --den are required");
        return RationalFn(ComplexPoly::from_real(parse_coeff_list(num)), ComplexPoly::from_real(parse_coeff_list(den)),
                          tol_cancel);
    }
};

void write_text(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(path);
    if (!f) throw ValidationError("cannot open output file: " + path);
    f << text;
}

std::string sanitize_csv_cell(std::string s) {
    for (char& c : s)
        if (c == ',' || c == '\n') c = ';';
    return s;
}

int run_rir(const PlantOpts& plant, int n, double mu, const CommonOpts& common) {
    common.require_format("json", "rir");
    const CyclicNetwork net(n, mu, plant.make_h(common.tol_cancel), common.tol_axis);
    const RirReport rep = compute_rir_report(net, common.report_options());
    write_text(common.out, to_json(rep).dump(2) + "\n");
    return 0;
}

int run_sweep(const PlantOpts& plant, const std::string& n_range, double mu, const CommonOpts& common) {
    common.require_format("csv", "sweep");
    const auto [n_lo, n_hi] = parse_n_range(n_range);
    std::ostringstream csv;
    csv << "n,rho_p,rho_plus,rho_upper_homogeneous,rho_c_estimate,nominal_unstable,closed_form_first_order,error\n";
    for (int n = n_lo; n <= n_hi; n += 2) {
        csv << n << ",";
        try {
            const CyclicNetwork net(n, mu, plant.make_h(common.tol_cancel), common.tol_axis);
            const RirReport rep = compute_rir_report(net, common.report_options());
            if (rep.rho_plus) {
                csv << format_full(rep.rho_p) << "," << format_full(*rep.rho_plus) << ",";
                csv << (rep.rho_upper_homogeneous ? format_full(*rep.rho_upper_homogeneous) : "") << ",";
                csv << (rep.rho_c_estimate_value ? format_full(*rep.rho_c_estimate_value) : "") << ",";
                csv << "true,";
            } else {
                csv << ",,,,false,";
            }
            csv << (rep.closed_form_first_order ? format_full(*rep.closed_form_first_order) : "") << ",";
            csv << "\n";
        } catch (const Error& e) {
            csv << ",,,,,," << sanitize_csv_cell(e.what()) << "\n";
        }
    }
    write_text(common.out, csv.str());
    return 0;
}

int run_nyquist(const PlantOpts& plant, int n, double mu, double rho, double grid_lo, double grid_hi, int grid_count,
                int alphas, const CommonOpts& common) {
    common.require_format("csv", "nyquist");
    if (common.out.empty()) throw ValidationError("nyquist writes three CSV files; --out <prefix> is required");
    const CyclicNetwork net(n, mu, plant.make_h(common.tol_cancel), common.tol_axis);
    const FrequencyGrid grid = FrequencyGrid::log_spaced(grid_lo, grid_hi, grid_count, /*include_zero=*/true);
    const auto curve = inverse_nyquist_curve(net.h, grid, common.tol_axis);
    const ValueSetBand band = value_set_band(net.h, rho, grid, alphas, common.tol_axis);
    const std::vector<cplx> markers = eigen_markers(n, mu);

    std::ostringstream c1;
    c1 << "omega,re,im\n";
    for (const auto& [w, phi] : curve)
        c1 << format_full(w) << "," << format_full(phi.real()) << "," << format_full(phi.imag()) << "\n";
    write_text(common.out + ".curve.csv", c1.str());

    std::ostringstream c2;
    c2 << "omega,alpha,re,im\n";
    for (std::size_t i = 0; i < band.omegas.size(); ++i)
        for (int k = 0; k < band.alphas; ++k) {
            const double alpha = 2.0 * std::numbers::pi * k / band.alphas;
            const cplx p = band.boundaries[i][static_cast<std::size_t>(k)];
            c2 << format_full(band.omegas[i]) << "," << format_full(alpha) << "," << format_full(p.real()) << ","
               << format_full(p.imag()) << "\n";
        }
    write_text(common.out + ".band.csv", c2.str());

    std::ostringstream c3;
    c3 << "k,re,im\n";
    for (std::size_t k = 0; k < markers.size(); ++k)
        c3 << (k + 1) << "," << format_full(markers[k].real()) << "," << format_full(markers[k].imag()) << "\n";
    write_text(common.out + ".markers.csv", c3.str());
    return 0;
}

int run_verify(const PlantOpts& plant, int n, double mu, const std::vector<std::string>& delta_specs,
               const CommonOpts& common) {
    common.require_format("json", "verify");
    if (delta_specs.empty()) throw ValidationError("verify requires at least one --delta");
    const CyclicNetwork net(n, mu, plant.make_h(common.tol_cancel), common.tol_axis);
    std::vector<RationalFn> deltas;
    for (const std::string& spec : delta_specs) {
        const auto [num, den] = parse_rational_spec(spec);
        deltas.emplace_back(ComplexPoly::from_real(num), ComplexPoly::from_real(den), common.tol_cancel);
    }
    std::optional<DiagPerturbation> perturbation;
    if (deltas.size() == 1) perturbation = DiagPerturbation::broadcast(deltas[0], n, common.tol_axis);
    else if (static_cast<int>(deltas.size()) == n) perturbation = DiagPerturbation(deltas, common.tol_axis);
    else throw ValidationError("verify needs exactly 1 (broadcast) or n --delta entries");
    const VerifyVerdict v =
        verify_perturbation(net, *perturbation, common.margin_req, common.tol_axis, common.tol_cancel);
    write_text(common.out, to_json(v).dump(2) + "\n");
    return 0;
}

int run_homogenize(const std::string& deltas_text, double r, const CommonOpts& common) {
    common.require_format("json", "homogenize");
    const std::vector<cplx> deltas = parse_complex_list(deltas_text);
    const cplx delta = homogenize(deltas, r);
    cplx product(1.0);
    double product_mag = 1.0;
    for (const cplx& d : deltas) {
        product *= cplx(1.0) + d;
        product_mag *= std::abs(cplx(1.0) + d);
    }
    cplx lifted(1.0);
    for (std::size_t i = 0; i < deltas.size(); ++i) lifted *= cplx(1.0) + delta;
    nlohmann::ordered_json j;
    j["delta"] = nlohmann::ordered_json{{"re", delta.real()}, {"im", delta.imag()}};
    j["abs"] = std::abs(delta);
    j["product_residual"] = std::abs(lifted - product) / std::max(product_mag, 1e-300);
    write_text(common.out, j.dump(2) + "\n");
    return 0;
}

int fail(int code, const std::string& kind, const std::string& message) {
    nlohmann::ordered_json j;
    j["error"] = nlohmann::ordered_json{{"code", code}, {"kind", kind}, {"message", message}};
    std::cerr << j.dump() << "\n";
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Robust instability radius analysis for cyclic multi-agent networks"};
    app.require_subcommand(1);

    CommonOpts common;
    PlantOpts plant;
    int n = 0;
    double mu = 0.0;

    // rir first-order | rir general
    CLI::App* rir = app.add_subcommand("rir", "Compute the full RIR report (JSON)");
    rir->require_subcommand(1);
    CLI::App* rir_fo = rir->add_subcommand("first-order", "h(s) = K/(tau s + 1)");
    rir_fo->add_option("--K", plant.gain, "Gain K > 0")->required();
    rir_fo->add_option("--tau", plant.time_const, "Time constant tau > 0")->required();
    rir_fo->add_option("--n", n, "Number of agents (odd)")->required();
    rir_fo->add_option("--mu", mu, "Interaction strength mu > 0")->required();
    add_common(rir_fo, common);
    CLI::App* rir_gen = rir->add_subcommand("general", "h(s) from coefficient lists (descending powers)");
    rir_gen->add_option("--num", plant.num, "Numerator, e.g. '3'")->required();
    rir_gen->add_option("--den", plant.den, "Denominator, e.g. '1,4,3' for s^2+4s+3")->required();
    rir_gen->add_option("--n", n, "Number of agents (odd)")->required();
    rir_gen->add_option("--mu", mu, "Interaction strength mu > 0")->required();
    add_common(rir_gen, common);

    // sweep
    std::string n_range;
    CLI::App* sweep = app.add_subcommand("sweep", "RIR quantities over a range of odd n (CSV)");
    sweep->add_option("--K", plant.gain, "Gain K for first-order h");
    sweep->add_option("--tau", plant.time_const, "Time constant tau for first-order h");
    sweep->add_option("--num", plant.num, "Numerator coefficients");
    sweep->add_option("--den", plant.den, "Denominator coefficients");
    sweep->add_option("--n-range", n_range, "Inclusive odd range, e.g. 3:21")->required();
    sweep->add_option("--mu", mu, "Interaction strength mu > 0")->required();
    add_common(sweep, common);

    // nyquist
    double rho = 0.0, grid_lo = 1e-3, grid_hi = 1e3;
    int grid_count = 2001, alphas = 256;
    CLI::App* nyq = app.add_subcommand("nyquist", "Inverse Nyquist curve, value-set band and markers (CSV files)");
    nyq->add_option("--K", plant.gain, "Gain K for first-order h");
    nyq->add_option("--tau", plant.time_const, "Time constant tau for first-order h");
    nyq->add_option("--num", plant.num, "Numerator coefficients");
    nyq->add_option("--den", plant.den, "Denominator coefficients");
    nyq->add_option("--n", n, "Number of agents (odd)")->required();
    nyq->add_option("--mu", mu, "Interaction strength mu > 0")->required();
    nyq->add_option("--rho", rho, "Disk radius in (0,1)")->required();
    nyq->add_option("--grid-lo", grid_lo, "Lowest positive frequency");
    nyq->add_option("--grid-hi", grid_hi, "Highest frequency");
    nyq->add_option("--grid-count", grid_count, "Number of log-spaced frequencies");
    nyq->add_option("--alphas", alphas, "Boundary samples per frequency");
    add_common(nyq, common);

    // verify
    std::vector<std::string> delta_specs;
    CLI::App* verify = app.add_subcommand("verify", "Check whether a perturbation stabilizes the network (JSON)");
    verify->add_option("--K", plant.gain, "Gain K for first-order h");
    verify->add_option("--tau", plant.time_const, "Time constant tau for first-order h");
    verify->add_option("--num", plant.num, "Numerator coefficients");
    verify->add_option("--den", plant.den, "Denominator coefficients");
    verify->add_option("--n", n, "Number of agents (odd)")->required();
    verify->add_option("--mu", mu, "Interaction strength mu > 0")->required();
    verify->add_option("--delta", delta_specs, "Perturbation 'num;den' (once = broadcast, or n times)")->required();
    add_common(verify, common);

    // homogenize
    std::string deltas_text;
    double radius = 0.0;
    CLI::App* hom = app.add_subcommand("homogenize", "Homogeneous equivalent of a complex tuple (JSON)");
    hom->add_option("--deltas", deltas_text, "Comma-separated complex list, e.g. '0.1+0.2i,-0.5+0i'")->required();
    hom->add_option("--r", radius, "Disk radius in (0,1)")->required();
    add_common(hom, common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return fail(2, "validation", e.what());
    }

    try {
        if (rir_fo->parsed() || rir_gen->parsed()) {
            plant.first_order = rir_fo->parsed();
            return run_rir(plant, n, mu, common);
        }
        if (sweep->parsed()) {
            plant.resolve();
            return run_sweep(plant, n_range, mu, common);
        }
        if (nyq->parsed()) {
            plant.resolve();
            return run_nyquist(plant, n, mu, rho, grid_lo, grid_hi, grid_count, alphas, common);
        }
        if (verify->parsed()) {
            plant.resolve();
            return run_verify(plant, n, mu, delta_specs, common);
        }
        if (hom->parsed()) return run_homogenize(deltas_text, radius, common);
        return fail(2, "validation", "no subcommand given");
    } catch (const ValidationError& e) {
        return fail(2, "validation", e.what());
    } catch (const NumericalError& e) {
        return fail(3, "numerical", e.what());
    } catch (const PreconditionError& e) {
        return fail(4, "precondition", e.what());
    } catch (const std::exception& e) {
        return fail(3, "numerical", e.what());
    }
}
