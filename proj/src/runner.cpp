#include "kvnlab/runner.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "kvnlab/analysis.hpp"
#include "kvnlab/csv.hpp"
#include "kvnlab/errors.hpp"
#include "kvnlab/experiments.hpp"
#include "kvnlab/finite.hpp"
#include "kvnlab/nsm.hpp"
#include "kvnlab/report.hpp"

namespace kvnlab {

namespace {

Grid1D grid_1d(const RunConfig& cfg) { return Grid1D(cfg.n, -cfg.box, cfg.box); }

Grid2D grid_2d(const RunConfig& cfg) {
    return Grid2D(Grid1D(cfg.n_q, -cfg.box_q, cfg.box_q), Grid1D(cfg.n_p, -cfg.box_p, cfg.box_p));
}

double flatness(const RealField1D& f) {
    double lo = f.values.front(), hi = lo;
    for (double v : f.values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return hi - lo;
}

double flatness(const RealField2D& f) {
    double lo = f.values.front(), hi = lo;
    for (double v : f.values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return hi - lo;
}

nlohmann::json extrema_json(const std::vector<Extremum>& ex) {
    nlohmann::json arr = nlohmann::json::array();
    for (const Extremum& e : ex) {
        arr.push_back({{"position", e.position},
                       {"kind", e.kind == ExtremumKind::Maximum ? "max" : "min"},
                       {"value", e.value},
                       {"contrast", e.contrast}});
    }
    return arr;
}

int finish(ExperimentReport& report, const RunConfig& cfg, double tolerance) {
    report.params = config_json(cfg);
    report.write(cfg.out);
    return report.max_abs_error <= tolerance ? kExitOk : kExitTolerance;
}

int run_twolevel(const RunConfig& cfg) {
    ExperimentReport report;
    report.experiment = cfg.experiment;

    std::ostringstream table;
    table << "# omega_tau,p_pure,p_mixed,p_pure_closed,p_mixed_closed\n";
    double worst = 0.0;
    for (double wt : cfg.omega_tau) {
        const TwoLevelResult r = two_level_experiment(wt);
        const double cp = two_level_pure_closed_form(wt);
        const double cm = two_level_mixed_closed_form(wt);
        worst = std::max({worst, std::abs(r.p_pure - cp), std::abs(r.p_mixed - cm)});
        table << format_double(wt) << ',' << format_double(r.p_pure) << ','
              << format_double(r.p_mixed) << ',' << format_double(cp) << ','
              << format_double(cm) << '\n';
    }
    report.tables.emplace_back("twolevel_sweep", table.str());
    if (cfg.omega_tau.size() == 1) {
        const TwoLevelResult r = two_level_experiment(cfg.omega_tau.front());
        report.moments["p_pure"] = r.p_pure;
        report.moments["p_mixed"] = r.p_mixed;
        report.closed_form["p_pure"] = two_level_pure_closed_form(cfg.omega_tau.front());
        report.closed_form["p_mixed"] = two_level_mixed_closed_form(cfg.omega_tau.front());
    }
    report.closed_form["sweep_points"] = static_cast<double>(cfg.omega_tau.size());
    report.max_abs_error = worst;
    return finish(report, cfg, 1e-12);
}

int run_nsm_qm(const RunConfig& cfg) {
    const Grid1D grid = grid_1d(cfg);
    const QmState initial = gaussian_packet(grid, cfg.a, cfg.p_i, cfg.hbar, cfg.mass);
    const NsmQmReport nsm = nsm_x_qm(initial, cfg.tau, grid.length());

    ExperimentReport report;
    report.experiment = cfg.experiment;
    report.densities.emplace_back("rho_x_t0minus", nsm.rho_x_before);
    report.densities.emplace_back("rho_x_t0plus", nsm.rho_x_after);
    report.densities.emplace_back("rho_p_t0minus", nsm.rho_p_before);
    report.densities.emplace_back("rho_p_t0plus", nsm.rho_p_after);
    report.densities.emplace_back("rho_x_tau", nsm.rho_x_tau);
    report.densities.emplace_back("rho_x_tau_unmeasured", nsm.rho_x_pure_tau);

    const Moments mx = moments(nsm.rho_x_before);
    const Moments mp = moments(nsm.rho_p_before);
    const Moments mx_tau = moments(nsm.rho_x_pure_tau);
    report.moments["x_mean_t0"] = mx.mean;
    report.moments["x_var_t0"] = mx.variance;
    report.moments["p_mean_t0"] = mp.mean;
    report.moments["p_var_t0"] = mp.variance;
    report.moments["x_mean_tau_unmeasured"] = mx_tau.mean;
    report.moments["x_var_tau_unmeasured"] = mx_tau.variance;
    report.moments["l1_unmeasured_vs_flat"] = nsm.l1_pure_vs_flat;
    report.moments["flat_p_deviation"] = flatness(nsm.rho_p_after);
    report.moments["flat_x_tau_deviation"] = flatness(nsm.rho_x_tau);
    report.moments["x_statistics_shift"] = l1_distance(nsm.rho_x_before, nsm.rho_x_after);

    const double a = cfg.a, tau = cfg.tau, m = cfg.mass, h = cfg.hbar;
    report.closed_form["x_mean_t0"] = 0.0;
    report.closed_form["x_var_t0"] = a * a / 2.0;
    report.closed_form["p_mean_t0"] = cfg.p_i;
    report.closed_form["p_var_t0"] = h * h / (2.0 * a * a);
    report.closed_form["x_mean_tau_unmeasured"] = cfg.p_i * tau / m;
    report.closed_form["x_var_tau_unmeasured"] =
        (m * m * a * a * a * a + h * h * tau * tau) / (2.0 * m * m * a * a);
    report.closed_form["flat_p_value"] = nsm.flat_p_value;
    report.closed_form["flat_x_value"] = nsm.flat_x_value;
    report.info["box_regularization"] =
        "flat densities are per-unit-length constants on the stated box";

    double worst = 0.0;
    for (const char* key : {"x_mean_t0", "x_var_t0", "p_mean_t0", "p_var_t0",
                            "x_mean_tau_unmeasured", "x_var_tau_unmeasured"})
        worst = std::max(worst, std::abs(report.moments[key] - report.closed_form[key]));
    worst = std::max({worst, report.moments["flat_p_deviation"],
                      report.moments["flat_x_tau_deviation"],
                      report.moments["x_statistics_shift"]});
    report.max_abs_error = worst;
    return finish(report, cfg, 0.01);
}

int run_nsm_kvn(const RunConfig& cfg) {
    const Grid2D grid = grid_2d(cfg);
    const KvnState initial = gaussian_phase_space(grid, cfg.a, cfg.b, cfg.p_i, cfg.mass);
    const NsmKvnReport nsm = nsm_phi_kvn(initial, cfg.tau);

    ExperimentReport report;
    report.experiment = cfg.experiment;
    report.densities.emplace_back("rho_phi_t0", nsm.rho_phi_before);
    report.densities.emplace_back("rho_lambda_t0minus", nsm.rho_lambda_before);
    report.densities.emplace_back("rho_phi_tau_measured", nsm.rho_phi_tau);
    report.densities.emplace_back("rho_phi_tau_unmeasured", nsm.rho_phi_pure_tau);

    const KvnState evolved = evolve_free_exact(initial, cfg.tau);
    const Moments mq = moments(q_marginal(evolved));
    const Moments mp = moments(p_marginal(evolved));
    report.moments["q_mean_tau"] = mq.mean;
    report.moments["q_var_tau"] = mq.variance;
    report.moments["p_mean_tau"] = mp.mean;
    report.moments["p_var_tau"] = mp.variance;
    report.moments["l1_measured_vs_unmeasured"] = nsm.l1_measured_vs_pure;
    report.moments["flat_lambda_deviation"] = flatness(nsm.rho_lambda_after);
    report.moments["phi_statistics_shift"] =
        l1_distance(nsm.rho_phi_before, nsm.rho_phi_after);

    const double tau = cfg.tau, m = cfg.mass;
    report.closed_form["q_mean_tau"] = cfg.p_i * tau / m;
    report.closed_form["q_var_tau"] = cfg.a * cfg.a / 2.0 + cfg.b * cfg.b * tau * tau / (2.0 * m * m);
    report.closed_form["p_mean_tau"] = cfg.p_i;
    report.closed_form["p_var_tau"] = cfg.b * cfg.b / 2.0;
    report.closed_form["flat_lambda_value"] = nsm.flat_lambda_value;

    double worst = 0.0;
    for (const char* key : {"q_mean_tau", "q_var_tau", "p_mean_tau", "p_var_tau"})
        worst = std::max(worst, std::abs(report.moments[key] - report.closed_form[key]));
    worst = std::max({worst, report.moments["l1_measured_vs_unmeasured"],
                      report.moments["flat_lambda_deviation"],
                      report.moments["phi_statistics_shift"]});
    report.max_abs_error = worst;
    return finish(report, cfg, 0.01);
}

int run_twoslit(const RunConfig& cfg) {
    TwoSlitConfig ts;
    ts.slit_center = cfg.slit_center;
    ts.slit_half_width = cfg.slit_half_width;
    ts.amplitude = 1.0 / std::sqrt(4.0 * cfg.slit_half_width);
    ts.hbar = cfg.hbar;
    ts.mass = cfg.mass;
    ts.t_final = cfg.t_final;
    ts.kvn_p_sigma = cfg.kvn_p_sigma;

    const TwoSlitQmReport qm = two_slit_qm(ts, grid_1d(cfg));
    const TwoSlitKvnReport kvn = two_slit_kvn(ts, grid_2d(cfg));

    ExperimentReport report;
    report.experiment = cfg.experiment;
    report.densities.emplace_back("rho_x_t0", qm.rho_x_t0);
    report.densities.emplace_back("rho_p_t0", qm.rho_p_t0);
    report.densities.emplace_back("rho_x_t1", qm.rho_x_t1);
    report.densities.emplace_back("rho_lambda_x_t0", kvn.rho_lambda_x_t0);
    report.densities.emplace_back("rho_x_t1_kvn", kvn.rho_x_t1);

    report.moments["x_var_t0"] = qm.x0_moments.variance;
    report.moments["x_mean_t0"] = qm.x0_moments.mean;
    report.moments["closed_form_max_err"] = qm.closed_form_max_err;
    report.moments["dft_vs_closed_max_err"] = qm.dft_vs_closed_max_err;
    report.moments["lambda_identity_max_err"] = kvn.qm_identity_max_err;
    report.moments["boundary_mass_t0"] = qm.boundary_mass_t0;
    report.moments["boundary_mass_t1"] = qm.boundary_mass_t1;

    const double w = ts.slit_half_width, c = ts.slit_center;
    report.closed_form["x_mean_t0"] = 0.0;
    report.closed_form["x_var_t0"] = c * c + w * w / 3.0;
    report.closed_form["rho_p_small_p_limit"] = two_slit_momentum_density(0.0, ts);

    auto count_kind = [](const std::vector<Extremum>& ex, ExtremumKind kind, double window,
                         double min_contrast) {
        int n = 0;
        for (const Extremum& e : ex)
            if (e.kind == kind && std::abs(e.position) <= window && e.contrast > min_contrast)
                ++n;
        return n;
    };
    const int qm_minima = count_kind(qm.extrema_x_t1, ExtremumKind::Minimum, 6.0, 0.2);
    const int kvn_minima = count_kind(kvn.extrema_x_t1, ExtremumKind::Minimum, 6.0, 0.2);
    const int kvn_maxima = count_kind(kvn.extrema_x_t1, ExtremumKind::Maximum, 6.0, 0.05);
    report.moments["qm_interference_minima"] = qm_minima;
    report.moments["kvn_interference_minima"] = kvn_minima;
    report.moments["kvn_maxima"] = kvn_maxima;
    report.extra["extrema_p_t0"] = extrema_json(qm.extrema_p_t0);
    report.extra["extrema_x_t1"] = extrema_json(qm.extrema_x_t1);
    report.extra["extrema_x_t1_kvn"] = extrema_json(kvn.extrema_x_t1);
    report.info["kvn_shift_method"] = shift_method_name(kvn.shift_method);
    report.info["kvn_p_profile"] = "gaussian width " + format_double(cfg.kvn_p_sigma) +
                                   " (p-profile is an artifact choice)";
    report.info["boxes"] = "artifact choices; see params";

    const bool dichotomy_ok = qm_minima >= 6 && kvn_minima <= 1 && kvn_maxima == 2;
    report.moments["dichotomy_ok"] = dichotomy_ok ? 1.0 : 0.0;
    // Variance of the sampled discontinuous profile is discretization-limited
    // (edge cells lump fractional mass at cell centers): own gate at 5e-3.
    const bool variance_ok =
        std::abs(qm.x0_moments.variance - report.closed_form["x_var_t0"]) < 5e-3;
    report.max_abs_error = std::max(qm.closed_form_max_err, kvn.qm_identity_max_err);
    const int code = finish(report, cfg, 1e-8);
    if (code != kExitOk) return code;
    return (dichotomy_ok && variance_ok) ? kExitOk : kExitTolerance;
}

int run_superselection(const RunConfig& cfg) {
    const Grid2D grid = grid_2d(cfg);
    const KvnState state = gaussian_phase_space(grid, cfg.a, cfg.b, cfg.p_i, cfg.mass);

    std::vector<RealField2D> observables;
    const std::vector<std::function<double(double, double)>> fns = {
        [](double, double) { return 1.0; },
        [](double q, double) { return q; },
        [](double, double p) { return p; },
        [](double q, double) { return q * q; },
        [](double, double p) { return p * p; },
        [](double q, double p) { return q * p; },
        [](double q, double p) { return q * q * p * p; },
        [](double q, double) { return std::sin(q); },
        [](double, double p) { return std::cos(p); },
        [](double q, double p) { return std::exp(-(q * q + p * p) / 8.0); }};
    const std::size_t n_obs = std::min<std::size_t>(cfg.observables, fns.size());
    for (std::size_t i = 0; i < n_obs; ++i) {
        RealField2D o(grid);
        for (std::size_t iq = 0; iq < grid.q_axis.n; ++iq)
            for (std::size_t ip = 0; ip < grid.p_axis.n; ++ip)
                o.at(iq, ip) = fns[i](grid.q_axis.point(iq), grid.p_axis.point(ip));
        observables.push_back(std::move(o));
    }

    double worst = 0.0;
    for (std::size_t d = 0; d < cfg.dressings; ++d) {
        const PhaseDressing dressing = PhaseDressing::random_smooth(4, cfg.seed + d);
        worst = std::max(worst, superselection_phase_invariance(state, dressing, observables));
    }

    // Pure-vs-mixed on the q-marginal, d = 64 bins.
    RealField1D sqrt_rho(grid.q_axis);
    const RealField1D marg = q_marginal(state);
    for (std::size_t i = 0; i < marg.values.size(); ++i)
        sqrt_rho.values[i] = std::sqrt(std::max(0.0, marg.values[i]));
    const double mixed_dev = pure_vs_mixed_equivalence(
        sqrt_rho, 64,
        {[](double) { return 1.0; }, [](double x) { return x; },
         [](double x) { return x * x; }, [](double x) { return std::sin(x); }});

    ExperimentReport report;
    report.experiment = cfg.experiment;
    report.moments["phase_invariance_max_dev"] = worst;
    report.moments["pure_vs_mixed_max_dev"] = mixed_dev;
    report.closed_form["phase_invariance_max_dev"] = 0.0;
    report.closed_form["pure_vs_mixed_max_dev"] = 0.0;
    report.info["dressings"] = "random-smooth truncated Fourier series, seeded";
    report.max_abs_error = std::max(worst, mixed_dev);
    return finish(report, cfg, 1e-12);
}

int run_gaussian_free(const RunConfig& cfg) {
    ExperimentReport report;
    report.experiment = cfg.experiment;

    // Quantum branch.
    const Grid1D grid = grid_1d(cfg);
    const QmState qm0 = gaussian_packet(grid, cfg.a, cfg.p_i, cfg.hbar, cfg.mass);
    const QmState qm1 = evolve_free(qm0, cfg.tau);
    const RealField1D rho_x = position_density(qm1);
    const Moments mx = moments(rho_x);
    report.densities.emplace_back("rho_x_tau", rho_x);
    report.moments["qm_x_mean"] = mx.mean;
    report.moments["qm_x_var"] = mx.variance;
    const double a = cfg.a, tau = cfg.tau, m = cfg.mass, h = cfg.hbar;
    report.closed_form["qm_x_mean"] = cfg.p_i * tau / m;
    report.closed_form["qm_x_var"] =
        (m * m * a * a * a * a + h * h * tau * tau) / (2.0 * m * m * a * a);

    // KvN branch.
    const Grid2D grid2 = grid_2d(cfg);
    const KvnState kvn0 = gaussian_phase_space(grid2, cfg.a, cfg.b, cfg.p_i, cfg.mass);
    const KvnState kvn1 = evolve_free_exact(kvn0, cfg.tau);
    const RealField1D rq = q_marginal(kvn1);
    const RealField1D rp = p_marginal(kvn1);
    const Moments mq = moments(rq);
    const Moments mp = moments(rp);
    report.densities.emplace_back("rho_q_tau_kvn", rq);
    report.densities.emplace_back("rho_p_tau_kvn", rp);
    report.moments["kvn_q_mean"] = mq.mean;
    report.moments["kvn_q_var"] = mq.variance;
    report.moments["kvn_p_mean"] = mp.mean;
    report.moments["kvn_p_var"] = mp.variance;
    report.closed_form["kvn_q_mean"] = cfg.p_i * tau / m;
    report.closed_form["kvn_q_var"] =
        cfg.a * cfg.a / 2.0 + cfg.b * cfg.b * tau * tau / (2.0 * m * m);
    report.closed_form["kvn_p_mean"] = cfg.p_i;
    report.closed_form["kvn_p_var"] = cfg.b * cfg.b / 2.0;

    double worst = 0.0;
    for (const auto& [key, value] : report.closed_form) {
        const double scale = std::max(1.0, std::abs(value));
        worst = std::max(worst, std::abs(report.moments[key] - value) / scale);
    }
    report.max_abs_error = worst;
    return finish(report, cfg, 0.005);
}

int run_commutator(const RunConfig& cfg) {
    const Grid1D grid = grid_1d(cfg);
    const std::vector<ComplexField1D> family = commutator_test_family(grid);
    const CommutatorResult result = commutator_check(grid, family);

    ExperimentReport report;
    report.experiment = cfg.experiment;
    report.moments["max_residual"] = result.max_residual;
    report.moments["accepted_states"] = static_cast<double>(result.residuals.size());
    report.moments["skipped_states"] = static_cast<double>(result.skipped.size());
    report.closed_form["max_residual"] = 0.0;
    nlohmann::json warn = nlohmann::json::array();
    for (const std::string& w : result.warnings) warn.push_back(w);
    report.extra["warnings"] = warn;
    nlohmann::json res = nlohmann::json::array();
    for (double r : result.residuals) res.push_back(r);
    report.extra["residuals"] = res;
    report.max_abs_error = result.max_residual;
    // The 1e-8 bound is the n >= 512 contract; coarser grids only report.
    return finish(report, cfg, cfg.n >= 512 ? 1e-8 : 1.0);
}

} // namespace

int run_experiment(const RunConfig& cfg) {
    if (cfg.experiment == "twolevel") return run_twolevel(cfg);
    if (cfg.experiment == "nsm-qm") return run_nsm_qm(cfg);
    if (cfg.experiment == "nsm-kvn") return run_nsm_kvn(cfg);
    if (cfg.experiment == "twoslit") return run_twoslit(cfg);
    if (cfg.experiment == "superselection") return run_superselection(cfg);
    if (cfg.experiment == "gaussian-free") return run_gaussian_free(cfg);
    if (cfg.experiment == "commutator") return run_commutator(cfg);
    throw ParameterError("run_experiment: unknown experiment '" + cfg.experiment + "'");
}

namespace {

nlohmann::json load_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());
    nlohmann::json j;
    in >> j;
    return j;
}

std::map<std::string, double> flatten_scalars(const nlohmann::json& report) {
    std::map<std::string, double> out;
    for (const char* section : {"moments", "closed_form"}) {
        if (!report.contains(section)) continue;
        for (const auto& [key, value] : report[section].items())
            if (value.is_number()) out[std::string(section) + "." + key] = value.get<double>();
    }
    if (report.contains("max_abs_error") && report["max_abs_error"].is_number())
        out["max_abs_error"] = report["max_abs_error"].get<double>();
    return out;
}

} // namespace

int write_golden(const std::filesystem::path& report_dir, const std::filesystem::path& out_path,
                 double relative_tolerance) {
    const nlohmann::json report = load_json(report_dir / "report.json");
    nlohmann::json golden;
    golden["experiment"] = report.value("experiment", "");
    golden["scalars"] = nlohmann::json::object();
    for (const auto& [name, value] : flatten_scalars(report)) {
        const double tol = std::max(1e-12, relative_tolerance * std::abs(value));
        golden["scalars"][name] = {{"value", value}, {"tolerance", tol}};
    }
    golden["checksums"] = nlohmann::json::object();
    for (const char* section : {"densities", "tables"}) {
        if (!report.contains(section)) continue;
        for (const auto& [name, file] : report[section].items())
            golden["checksums"][file.get<std::string>()] =
                fnv1a64_file_hex(report_dir / file.get<std::string>());
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw DataError("cannot write " + out_path.string());
    out << golden.dump(2) << '\n';
    return kExitOk;
}

int verify_report(const std::filesystem::path& report_dir,
                  const std::filesystem::path& golden_path) {
    nlohmann::json report, golden;
    try {
        report = load_json(report_dir / "report.json");
        golden = load_json(golden_path);
    } catch (const std::exception& e) {
        fprintf(stderr, "verify: %s\n", e.what());
        return kExitValidation;
    }

    const std::map<std::string, double> scalars = flatten_scalars(report);
    bool tolerance_failed = false;
    if (golden.contains("scalars")) {
        for (const auto& [name, spec] : golden["scalars"].items()) {
            const auto it = scalars.find(name);
            if (it == scalars.end()) {
                fprintf(stderr, "verify: scalar '%s' missing from report\n", name.c_str());
                return kExitValidation;
            }
            const double want = spec.at("value").get<double>();
            const double tol = spec.at("tolerance").get<double>();
            if (std::abs(it->second - want) > tol) {
                fprintf(stderr, "verify: scalar '%s' = %.17g, golden %.17g (tol %.3g)\n",
                        name.c_str(), it->second, want, tol);
                tolerance_failed = true;
            }
        }
    }
    if (golden.contains("checksums")) {
        for (const auto& [file, want] : golden["checksums"].items()) {
            const std::filesystem::path p = report_dir / file;
            if (!std::filesystem::exists(p)) {
                fprintf(stderr, "verify: missing file %s\n", p.string().c_str());
                return kExitValidation;
            }
            const std::string got = fnv1a64_file_hex(p);
            if (got != want.get<std::string>()) {
                fprintf(stderr, "verify: checksum mismatch for %s\n", file.c_str());
                tolerance_failed = true;
            }
        }
    }
    return tolerance_failed ? kExitTolerance : kExitOk;
}

} // namespace kvnlab
