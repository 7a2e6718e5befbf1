#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "kvnlab/config.hpp"
#include "kvnlab/errors.hpp"
#include "kvnlab/report.hpp"
#include "kvnlab/runner.hpp"

using namespace kvnlab;

namespace {

std::filesystem::path temp_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / ("kvnlab_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_binary(const std::string& args) {
    const char* bin = std::getenv("KVNLAB_BIN");
    REQUIRE(bin != nullptr);
    const int status = std::system((std::string(bin) + " " + args + " >/dev/null 2>/dev/null").c_str());
    return WEXITSTATUS(status);
}

} // namespace

TEST_CASE("config parsing and validation") {
    SUBCASE("key=value file with comments") {
        const auto dir = temp_dir("config");
        const auto cfg_path = dir / "run.cfg";
        std::ofstream(cfg_path) << "# a comment\nexperiment = twolevel\n"
                                   "omega_tau = 0.1, 0.2, 0.3\nseed = 9\n";
        RunConfig cfg = parse_config_file(cfg_path);
        CHECK(cfg.experiment == "twolevel");
        REQUIRE(cfg.omega_tau.size() == 3);
        CHECK(cfg.omega_tau[1] == 0.2);
        CHECK(cfg.seed == 9);
    }
    SUBCASE("unknown keys are rejected") {
        RunConfig cfg;
        CHECK_THROWS_WITH_AS(apply_override(cfg, "quux", "1"),
                             doctest::Contains("unknown key"), ParameterError);
    }
    SUBCASE("validation names the offending field") {
        RunConfig cfg;
        cfg.experiment = "nsm-qm";
        cfg.a = -1.0;
        CHECK_THROWS_WITH_AS(resolve_defaults(cfg), doctest::Contains("a must be positive"),
                             ParameterError);
        cfg.a = 1.0;
        cfg.n = 1000; // not a power of two
        CHECK_THROWS_WITH_AS(resolve_defaults(cfg), doctest::Contains("power of two"),
                             ParameterError);
    }
    SUBCASE("unknown experiment is rejected") {
        RunConfig cfg;
        cfg.experiment = "frobnicate";
        CHECK_THROWS_AS(resolve_defaults(cfg), ParameterError);
    }
    SUBCASE("twolevel default sweep has 129 points") {
        RunConfig cfg;
        cfg.experiment = "twolevel";
        resolve_defaults(cfg);
        CHECK(cfg.omega_tau.size() == 129);
    }
}

TEST_CASE("twolevel runner: report values at omega tau = pi/4") {
    const auto out = temp_dir("twolevel");
    RunConfig cfg;
    cfg.experiment = "twolevel";
    cfg.omega_tau = {0.7853981634};
    cfg.out = (out / "report").string();
    resolve_defaults(cfg);
    REQUIRE(run_experiment(cfg) == kExitOk);

    nlohmann::json j;
    std::ifstream in(out / "report" / "report.json");
    in >> j;
    CHECK(j["experiment"] == "twolevel");
    CHECK(std::abs(j["moments"]["p_pure"].get<double>() - 0.066987298107780646) < 1e-9);
    CHECK(std::abs(j["moments"]["p_mixed"].get<double>() - 0.5) < 1e-9);
    CHECK(j["max_abs_error"].get<double>() < 1e-12);
    CHECK(std::filesystem::exists(out / "report" / "twolevel_sweep.csv"));
}

TEST_CASE("determinism: identical config and seed give byte-identical outputs") {
    const auto out = temp_dir("determinism");
    for (const char* name : {"r1", "r2"}) {
        RunConfig cfg;
        cfg.experiment = "superselection";
        cfg.n_q = cfg.n_p = 64;
        cfg.box_q = cfg.box_p = 8.0;
        cfg.dressings = 3;
        cfg.seed = 123;
        cfg.out = (out / name).string();
        resolve_defaults(cfg);
        REQUIRE(run_experiment(cfg) == kExitOk);
    }
    CHECK(slurp(out / "r1" / "report.json") == slurp(out / "r2" / "report.json"));
}

TEST_CASE("golden workflow: self-comparison, perturbation, missing file") {
    const auto out = temp_dir("golden");
    RunConfig cfg;
    cfg.experiment = "nsm-qm";
    cfg.n = 512;
    cfg.box = 10.0;
    cfg.out = (out / "report").string();
    resolve_defaults(cfg);
    REQUIRE(run_experiment(cfg) == kExitOk);

    const auto golden_path = out / "golden.json";
    REQUIRE(write_golden(out / "report", golden_path) == kExitOk);

    SUBCASE("self-comparison passes") {
        CHECK(verify_report(out / "report", golden_path) == kExitOk);
    }

    SUBCASE("scalar perturbed beyond tolerance fails with exit 3") {
        nlohmann::json g;
        {
            std::ifstream in(golden_path);
            in >> g;
        }
        g["scalars"]["moments.x_var_t0"]["value"] =
            g["scalars"]["moments.x_var_t0"]["value"].get<double>() + 0.5;
        std::ofstream(golden_path) << g.dump(2);
        CHECK(verify_report(out / "report", golden_path) == kExitTolerance);
    }

    SUBCASE("missing density CSV fails with exit 2") {
        std::filesystem::remove(out / "report" / "rho_x_tau.csv");
        CHECK(verify_report(out / "report", golden_path) == kExitValidation);
    }
}

TEST_CASE("binary end-to-end: exit codes") {
    const auto out = temp_dir("binary");

    SUBCASE("twolevel run exits 0 and writes the report") {
        const int code = run_binary("run twolevel --omega-tau 0.7853981634 --out " +
                                    (out / "tl").string());
        CHECK(code == 0);
        CHECK(std::filesystem::exists(out / "tl" / "report.json"));
    }
    SUBCASE("invalid parameter exits 2") {
        CHECK(run_binary("run nsm-qm --a -1 --out " + (out / "bad").string()) == 2);
    }
    SUBCASE("unknown experiment exits 2") {
        CHECK(run_binary("run warp-drive --out " + (out / "bad2").string()) == 2);
    }
    SUBCASE("verify round trip through the binary") {
        REQUIRE(run_binary("run twolevel --omega-tau 0.5 --out " + (out / "v").string()) == 0);
        REQUIRE(run_binary("golden " + (out / "v").string() + " -o " +
                           (out / "g.json").string()) == 0);
        CHECK(run_binary("verify " + (out / "v").string() + " --golden " +
                         (out / "g.json").string()) == 0);
        CHECK(run_binary("verify " + (out / "missing").string() + " --golden " +
                         (out / "g.json").string()) == 2);
    }
}
