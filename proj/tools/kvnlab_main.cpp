#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "kvnlab/config.hpp"
#include "kvnlab/errors.hpp"
#include "kvnlab/runner.hpp"

namespace {

int do_run(const std::string& experiment, const std::string& config_file,
           const std::string& out_dir, const std::vector<std::string>& overrides) {
    kvnlab::RunConfig cfg;
    if (!config_file.empty()) cfg = kvnlab::parse_config_file(config_file);
    if (!experiment.empty()) cfg.experiment = experiment;
    for (const std::string& kv : overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw kvnlab::ParameterError("--set expects key=value, got '" + kv + "'");
        kvnlab::apply_override(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (!out_dir.empty()) cfg.out = out_dir;
    kvnlab::resolve_defaults(cfg);
    const int code = kvnlab::run_experiment(cfg);
    if (code == kvnlab::kExitOk) {
        std::printf("report written to %s\n", cfg.out.c_str());
    } else if (code == kvnlab::kExitTolerance) {
        std::fprintf(stderr, "numerical tolerance failure; see %s/report.json\n",
                     cfg.out.c_str());
    }
    return code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"kvnlab: operatorial classical (KvN) and quantum mechanics laboratory"};
    app.require_subcommand(1);

    std::string experiment, config_file, out_dir, omega_tau;
    std::vector<std::string> overrides;

    CLI::App* run = app.add_subcommand("run", "run an experiment and write its report directory");
    run->add_option("experiment", experiment, "one of: twolevel nsm-qm nsm-kvn twoslit "
                                              "superselection gaussian-free commutator");
    run->add_option("--config", config_file, "key=value config file");
    run->add_option("--out", out_dir, "output directory");
    run->add_option("--set", overrides, "override a config key (key=value, repeatable)");
    run->add_option("--omega-tau", omega_tau, "comma-separated omega*tau list (twolevel)");
    for (const char* key : {"n", "n_q", "n_p", "box", "box_q", "box_p", "a", "b", "p_i", "tau",
                            "hbar", "mass", "slit_center", "slit_half_width", "kvn_p_sigma",
                            "t_final", "steps", "dressings", "observables", "seed"}) {
        run->add_option_function<std::string>(
            std::string("--") + key,
            [&overrides, key](const std::string& v) { overrides.push_back(std::string(key) + "=" + v); },
            std::string("config key ") + key);
    }

    std::string report_dir, golden_file, golden_out;
    CLI::App* verify = app.add_subcommand("verify", "compare a report against a golden file");
    verify->add_option("report_dir", report_dir, "report directory")->required();
    verify->add_option("--golden", golden_file, "golden file")->required();

    CLI::App* golden = app.add_subcommand("golden", "emit a golden file from a report directory");
    golden->add_option("report_dir", report_dir, "report directory")->required();
    golden->add_option("-o,--out", golden_out, "golden file path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            if (!omega_tau.empty()) overrides.push_back("omega_tau=" + omega_tau);
            return do_run(experiment, config_file, out_dir, overrides);
        }
        if (verify->parsed()) return kvnlab::verify_report(report_dir, golden_file);
        if (golden->parsed()) return kvnlab::write_golden(report_dir, golden_out);
    } catch (const kvnlab::ParameterError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kvnlab::kExitValidation;
    } catch (const kvnlab::DataError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kvnlab::kExitValidation;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
