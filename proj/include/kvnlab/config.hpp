#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace kvnlab {

/// Flat run configuration; unknown keys are rejected. Defaults depend on the
/// experiment and are resolved by resolve_defaults, then echoed verbatim into
/// the report.
struct RunConfig {
    std::string experiment; // twolevel nsm-qm nsm-kvn twoslit superselection gaussian-free commutator

    // grids (0 = use the experiment default); box values are half-widths of
    // a zero-centered box [-box, box)
    std::size_t n = 0;
    std::size_t n_q = 0;
    std::size_t n_p = 0;
    double box = 0.0;
    double box_q = 0.0;
    double box_p = 0.0;

    // physics
    double a = 1.0;
    double b = 1.0;
    double p_i = 1.0;
    double tau = 1.0;
    std::vector<double> omega_tau; // twolevel sweep; empty = default sweep
    double hbar = 1.0;
    double mass = 1.0;

    // two-slit
    double slit_center = 1.0;
    double slit_half_width = 0.1;
    double kvn_p_sigma = 0.05;
    double t_final = 1.0;

    std::size_t steps = 256;       // split-step / characteristics substeps per unit time
    std::size_t dressings = 20;    // superselection
    std::size_t observables = 10;  // superselection
    std::uint64_t seed = 1;

    std::string out; // output directory (empty = ./<experiment>-report)
};

const std::vector<std::string>& known_experiments();

/// key=value lines, '#' comments. Unknown keys raise ParameterError.
RunConfig parse_config_file(const std::filesystem::path& path);

/// Applies a single "key=value" override (CLI surface).
void apply_override(RunConfig& cfg, const std::string& key, const std::string& value);

/// Fills in experiment-specific grid defaults and validates ranges;
/// raises ParameterError naming the offending field.
void resolve_defaults(RunConfig& cfg);

/// The resolved configuration as JSON, echoed into reports.
nlohmann::json config_json(const RunConfig& cfg);

} // namespace kvnlab
