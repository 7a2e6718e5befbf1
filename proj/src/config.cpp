#include "kvnlab/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "kvnlab/errors.hpp"

namespace kvnlab {

namespace {
constexpr double kPi = 3.14159265358979323846;

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw ParameterError("config: " + key + " expects a number, got '" + value + "'");
    }
}

std::size_t parse_size(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const long long v = std::stoll(value, &used);
        if (used != value.size() || v < 0) throw std::invalid_argument("range");
        return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
        throw ParameterError("config: " + key + " expects a nonnegative integer, got '" + value +
                             "'");
    }
}

std::vector<double> parse_list(const std::string& key, const std::string& value) {
    std::vector<double> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(parse_double(key, item));
    }
    if (out.empty()) throw ParameterError("config: " + key + " expects a comma-separated list");
    return out;
}

} // namespace

const std::vector<std::string>& known_experiments() {
    static const std::vector<std::string> names = {
        "twolevel", "nsm-qm", "nsm-kvn", "twoslit", "superselection", "gaussian-free",
        "commutator"};
    return names;
}

void apply_override(RunConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "experiment") cfg.experiment = value;
    else if (key == "n") cfg.n = parse_size(key, value);
    else if (key == "n_q") cfg.n_q = parse_size(key, value);
    else if (key == "n_p") cfg.n_p = parse_size(key, value);
    else if (key == "box") cfg.box = parse_double(key, value);
    else if (key == "box_q") cfg.box_q = parse_double(key, value);
    else if (key == "box_p") cfg.box_p = parse_double(key, value);
    else if (key == "a") cfg.a = parse_double(key, value);
    else if (key == "b") cfg.b = parse_double(key, value);
    else if (key == "p_i") cfg.p_i = parse_double(key, value);
    else if (key == "tau") cfg.tau = parse_double(key, value);
    else if (key == "omega_tau") cfg.omega_tau = parse_list(key, value);
    else if (key == "hbar") cfg.hbar = parse_double(key, value);
    else if (key == "mass") cfg.mass = parse_double(key, value);
    else if (key == "slit_center") cfg.slit_center = parse_double(key, value);
    else if (key == "slit_half_width") cfg.slit_half_width = parse_double(key, value);
    else if (key == "kvn_p_sigma") cfg.kvn_p_sigma = parse_double(key, value);
    else if (key == "t_final") cfg.t_final = parse_double(key, value);
    else if (key == "steps") cfg.steps = parse_size(key, value);
    else if (key == "dressings") cfg.dressings = parse_size(key, value);
    else if (key == "observables") cfg.observables = parse_size(key, value);
    else if (key == "seed") cfg.seed = parse_size(key, value);
    else if (key == "out") cfg.out = value;
    else throw ParameterError("config: unknown key '" + key + "'");
}

RunConfig parse_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParameterError("config: cannot open " + path.string());
    RunConfig cfg;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParameterError("config: line " + std::to_string(lineno) +
                                 " is not key=value: '" + line + "'");
        apply_override(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return cfg;
}

namespace {

void require(bool ok, const std::string& message) {
    if (!ok) throw ParameterError("config: " + message);
}

void default_size(std::size_t& field, std::size_t value) {
    if (field == 0) field = value;
}

void default_box(double& field, double value) {
    if (field == 0.0) field = value;
}

} // namespace

void resolve_defaults(RunConfig& cfg) {
    const auto& names = known_experiments();
    require(std::find(names.begin(), names.end(), cfg.experiment) != names.end(),
            "experiment must be one of twolevel, nsm-qm, nsm-kvn, twoslit, superselection, "
            "gaussian-free, commutator; got '" + cfg.experiment + "'");

    if (cfg.experiment == "nsm-qm") {
        default_size(cfg.n, 2048);
        default_box(cfg.box, 10.0);
    } else if (cfg.experiment == "nsm-kvn") {
        default_size(cfg.n_q, 256);
        default_size(cfg.n_p, 256);
        default_box(cfg.box_q, 8.0);
        default_box(cfg.box_p, 8.0);
    } else if (cfg.experiment == "twoslit") {
        default_size(cfg.n, 4096);
        default_box(cfg.box, 30.0);
        default_size(cfg.n_q, 2048);
        default_size(cfg.n_p, 512);
        default_box(cfg.box_q, 30.0);
        default_box(cfg.box_p, 0.32);
    } else if (cfg.experiment == "superselection") {
        default_size(cfg.n_q, 256);
        default_size(cfg.n_p, 256);
        default_box(cfg.box_q, 8.0);
        default_box(cfg.box_p, 8.0);
    } else if (cfg.experiment == "gaussian-free") {
        default_size(cfg.n, 4096);
        default_box(cfg.box, 40.0);
        default_size(cfg.n_q, 1024);
        default_size(cfg.n_p, 1024);
        default_box(cfg.box_q, 24.0);
        default_box(cfg.box_p, 12.0);
    } else if (cfg.experiment == "commutator") {
        default_size(cfg.n, 512);
        default_box(cfg.box, 10.0);
    } else if (cfg.experiment == "twolevel") {
        if (cfg.omega_tau.empty()) {
            cfg.omega_tau.resize(129);
            for (std::size_t k = 0; k < 129; ++k)
                cfg.omega_tau[k] = 2.0 * kPi * static_cast<double>(k) / 128.0;
        }
    }

    require(cfg.a > 0.0, "a must be positive");
    require(cfg.b > 0.0, "b must be positive");
    require(cfg.hbar > 0.0, "hbar must be positive");
    require(cfg.mass > 0.0, "mass must be positive");
    require(cfg.tau >= 0.0, "tau must be nonnegative");
    require(cfg.t_final > 0.0, "t_final must be positive");
    require(cfg.slit_half_width > 0.0, "slit_half_width must be positive");
    require(cfg.slit_center > cfg.slit_half_width, "slit_center must exceed slit_half_width");
    require(cfg.kvn_p_sigma > 0.0, "kvn_p_sigma must be positive");
    require(cfg.steps >= 1, "steps must be >= 1");
    for (double w : cfg.omega_tau)
        require(std::isfinite(w), "omega_tau entries must be finite");

    auto power_of_two = [](std::size_t n) { return n >= 8 && (n & (n - 1)) == 0; };
    if (cfg.n != 0) require(power_of_two(cfg.n), "n must be a power of two >= 8");
    if (cfg.n_q != 0) require(power_of_two(cfg.n_q), "n_q must be a power of two >= 8");
    if (cfg.n_p != 0) require(power_of_two(cfg.n_p), "n_p must be a power of two >= 8");
    if (cfg.box != 0.0) require(cfg.box > 0.0, "box must be positive");
    if (cfg.box_q != 0.0) require(cfg.box_q > 0.0, "box_q must be positive");
    if (cfg.box_p != 0.0) require(cfg.box_p > 0.0, "box_p must be positive");

    if (cfg.out.empty()) cfg.out = cfg.experiment + "-report";
}

nlohmann::json config_json(const RunConfig& cfg) {
    nlohmann::json j;
    j["experiment"] = cfg.experiment;
    j["n"] = cfg.n;
    j["n_q"] = cfg.n_q;
    j["n_p"] = cfg.n_p;
    j["box"] = cfg.box;
    j["box_q"] = cfg.box_q;
    j["box_p"] = cfg.box_p;
    j["a"] = cfg.a;
    j["b"] = cfg.b;
    j["p_i"] = cfg.p_i;
    j["tau"] = cfg.tau;
    j["omega_tau"] = cfg.omega_tau;
    j["hbar"] = cfg.hbar;
    j["mass"] = cfg.mass;
    j["slit_center"] = cfg.slit_center;
    j["slit_half_width"] = cfg.slit_half_width;
    j["kvn_p_sigma"] = cfg.kvn_p_sigma;
    j["t_final"] = cfg.t_final;
    j["steps"] = cfg.steps;
    j["dressings"] = cfg.dressings;
    j["observables"] = cfg.observables;
    j["seed"] = cfg.seed;
    // the output directory is deliberately not echoed: reports are
    // byte-identical wherever they are written
    return j;
}

} // namespace kvnlab
