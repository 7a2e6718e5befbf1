#include <doctest.h>

#include <cmath>
#include <random>

#include "kvnlab/analysis.hpp"
#include "kvnlab/errors.hpp"
#include "kvnlab/experiments.hpp"
#include "kvnlab/finite.hpp"
#include "kvnlab/fourier.hpp"
#include "oracles.hpp"

using namespace kvnlab;

namespace {
constexpr double kPi = 3.14159265358979323846;

RealField2D observable_on(const Grid2D& g, const std::function<double(double, double)>& f) {
    RealField2D o(g);
    for (std::size_t iq = 0; iq < g.q_axis.n; ++iq)
        for (std::size_t ip = 0; ip < g.p_axis.n; ++ip)
            o.at(iq, ip) = f(g.q_axis.point(iq), g.p_axis.point(ip));
    return o;
}
} // namespace

TEST_CASE("two-slit profile and closed-form transform") {
    TwoSlitConfig cfg;
    const Grid1D grid(4096, -30.0, 30.0);

    SUBCASE("config validation") {
        TwoSlitConfig bad = cfg;
        bad.amplitude = 1.0;
        CHECK_THROWS_AS(bad.validate(), ParameterError);
        bad = cfg;
        bad.slit_center = 0.05; // slits overlap
        CHECK_THROWS_AS(bad.validate(), ParameterError);
    }

    SUBCASE("profile: 5/2 on the slits, 0 elsewhere, unit mass") {
        const ComplexField1D f = two_slit_profile(grid, cfg);
        CHECK(norm_sq(f) == doctest::Approx(1.0).epsilon(1e-14));
        for (std::size_t i = 0; i < grid.n; ++i) {
            const double x = grid.point(i);
            const double dens = std::norm(f.values[i]);
            const double edge_dist = std::min(std::abs(std::abs(x) - 0.9),
                                              std::abs(std::abs(x) - 1.1));
            if (edge_dist < grid.spacing()) continue; // edge cells carry fractional mass
            if (std::abs(x) > 0.9 && std::abs(x) < 1.1) {
                CHECK(dens == doctest::Approx(2.5).epsilon(1e-13));
            } else {
                CHECK(dens == 0.0);
            }
        }
    }

    SUBCASE("closed form equals quadrature of the defining integral") {
        // The momentum density constant is re-derived: 8 A^2 w^2/(pi hbar)
        // at p->0, i.e. 1/(5 pi) at the defaults, and (20/pi) overall.
        CHECK(two_slit_momentum_density(0.0, cfg) ==
              doctest::Approx(1.0 / (5.0 * kPi)).epsilon(1e-14));
        for (double p : {1e-6, 0.3, 1.0, 1.5707963, 4.0, 11.3, 31.4, 100.0}) {
            const double closed = two_slit_momentum_density(p, cfg);
            const double quad = std::norm(oracles::slit_transform_quadrature(p, cfg, 4096));
            CHECK(std::abs(closed - quad) < 1e-12);
            CHECK(std::abs(std::norm(two_slit_transform(p, cfg)) - closed) < 1e-14);
        }
        // Parseval: the closed form integrates to 1 over the line; the
        // truncated 1/p^2 tail contributes 2*(20/pi)*(1/4)/P beyond |p|=P
        const double window = 2000.0;
        const double total = oracles::simpson(
            [&](double p) { return two_slit_momentum_density(p, cfg); }, -window, window,
            2000000);
        const double tail = 10.0 / (kPi * window);
        CHECK(total + tail == doctest::Approx(1.0).epsilon(1e-5));
    }
}

TEST_CASE("two_slit_qm: closed form, minima, Fresnel oracle agreement") {
    TwoSlitConfig cfg;
    const Grid1D grid(4096, -30.0, 30.0);
    const TwoSlitQmReport report = two_slit_qm(cfg, grid);

    SUBCASE("rho_p matches the re-derived closed form to rounding") {
        CHECK(report.closed_form_max_err < 1e-12);
        // the sampled-profile DFT route agrees at its O(dx) accuracy
        CHECK(report.dft_vs_closed_max_err < 0.01);
    }

    SUBCASE("x-variance at t=0") {
        CHECK(report.x0_moments.variance ==
              doctest::Approx(1.0 + 0.01 / 3.0).epsilon(1e-3));
    }

    SUBCASE("p-minima sit at pi/2 + k pi within one grid spacing") {
        const double dp = report.rho_p_t0.grid.spacing();
        std::size_t counted = 0;
        for (const auto& e : report.extrema_p_t0) {
            if (e.kind != ExtremumKind::Minimum || std::abs(e.position) > 25.0) continue;
            const double k = std::round((e.position - kPi / 2.0) / kPi);
            CHECK(std::abs(e.position - (kPi / 2.0 + k * kPi)) < dp);
            ++counted;
        }
        CHECK(counted >= 10);
    }

    SUBCASE("interference minima agree with the Fresnel quadrature oracle") {
        RealField1D oracle_dens(grid);
        for (std::size_t i = 0; i < grid.n; ++i)
            oracle_dens.values[i] =
                std::norm(oracles::fresnel_propagate(grid.point(i), cfg.t_final, cfg, 512));
        const auto oracle_ex = local_extrema(oracle_dens, 0.2);

        std::size_t compared = 0;
        for (const auto& e : report.extrema_x_t1) {
            if (e.kind != ExtremumKind::Minimum || std::abs(e.position) > 8.0) continue;
            double best = 1e9;
            for (const auto& o : oracle_ex)
                if (o.kind == ExtremumKind::Minimum)
                    best = std::min(best, std::abs(o.position - e.position));
            CHECK(best < grid.spacing());
            ++compared;
        }
        // fringe spacing pi puts 4 deep minima inside |x|<=6 and 6 inside
        // |x|<=8; the counts must match the oracle exactly
        CHECK(compared == 6);
        auto count_minima = [](const std::vector<Extremum>& ex, double window) {
            int n = 0;
            for (const auto& e : ex)
                if (e.kind == ExtremumKind::Minimum && std::abs(e.position) <= window &&
                    e.contrast > 0.2)
                    ++n;
            return n;
        };
        CHECK(count_minima(report.extrema_x_t1, 6.0) == count_minima(oracle_ex, 6.0));
        CHECK(count_minima(report.extrema_x_t1, 6.0) == 4);
        CHECK(count_minima(report.extrema_x_t1, 8.0) == 6);
    }

    SUBCASE("slits near the box edge raise DataError") {
        TwoSlitConfig wide = cfg;
        wide.slit_center = 29.5;
        wide.slit_half_width = 0.1;
        CHECK_THROWS(two_slit_qm(wide, grid));
    }
}

TEST_CASE("two_slit_kvn: lambda identity, no interference, convolution oracle") {
    TwoSlitConfig cfg;
    const Grid2D grid(Grid1D(2048, -30.0, 30.0), Grid1D(512, -0.32, 0.32));
    const TwoSlitKvnReport report = two_slit_kvn(cfg, grid);

    SUBCASE("lambda_x density equals the QM momentum density pointwise") {
        CHECK(report.qm_identity_max_err < 1e-10);
    }

    SUBCASE("the lambda_x distribution does show the fringe structure") {
        int minima = 0;
        for (const auto& e : report.extrema_lambda_t0)
            if (e.kind == ExtremumKind::Minimum && std::abs(e.position) <= 25.0 &&
                e.contrast > 0.2)
                ++minima;
        CHECK(minima >= 10);
    }

    SUBCASE("x-density at t=1: two smoothed tops, one central valley, no fringes") {
        int maxima = 0, minima = 0;
        for (const auto& e : report.extrema_x_t1) {
            if (std::abs(e.position) > 6.0) continue;
            if (e.kind == ExtremumKind::Maximum && e.contrast > 0.05) ++maxima;
            if (e.kind == ExtremumKind::Minimum && e.contrast > 0.2) ++minima;
        }
        CHECK(maxima == 2);
        CHECK(minima <= 1);
    }

    SUBCASE("erf-convolution oracle agreement at the sampling accuracy") {
        double worst = 0.0;
        for (std::size_t i = 0; i < grid.q_axis.n; ++i) {
            const double x = grid.q_axis.point(i);
            if (std::abs(x) > 3.0) continue;
            worst = std::max(worst,
                             std::abs(report.rho_x_t1.values[i] -
                                      oracles::kvn_slit_density_convolution(x, cfg.t_final, cfg)));
        }
        CHECK(worst < 0.05); // edge cells of the sampled profile are O(dq)
    }

    SUBCASE("b -> 0: the top hats merely persist") {
        TwoSlitConfig narrow = cfg;
        narrow.kvn_p_sigma = 0.01;
        const Grid2D grid_narrow(Grid1D(2048, -30.0, 30.0), Grid1D(512, -0.08, 0.08));
        const TwoSlitKvnReport r2 = two_slit_kvn(narrow, grid_narrow);
        const double drift_narrow = l1_distance(r2.rho_x_t1, r2.rho_x_t0);
        const double drift_default = l1_distance(report.rho_x_t1, report.rho_x_t0);
        CHECK(drift_narrow < 0.05);
        CHECK(drift_narrow < 0.25 * drift_default);
    }

    SUBCASE("p-grid must resolve the chi profile") {
        TwoSlitConfig narrow = cfg;
        narrow.kvn_p_sigma = 1e-4;
        CHECK_THROWS_AS(two_slit_kvn(narrow, grid), DataError);
    }
}

TEST_CASE("superselection_phase_invariance") {
    const Grid2D g(Grid1D(256, -8.0, 8.0), Grid1D(256, -8.0, 8.0));
    const KvnState state = gaussian_phase_space(g, 1.0, 1.0, 0.5);
    const std::vector<RealField2D> observables = {
        observable_on(g, [](double q, double) { return q; }),
        observable_on(g, [](double q, double p) { return q * q * p * p; }),
        observable_on(g, [](double q, double p) { return std::sin(q) * std::cos(p); })};

    SUBCASE("linear dressing A = 3q") {
        CHECK(superselection_phase_invariance(state, PhaseDressing::linear(3.0, 0.0),
                                              observables) < 1e-12);
    }
    SUBCASE("random smooth dressings") {
        for (std::uint64_t seed = 1; seed <= 5; ++seed)
            CHECK(superselection_phase_invariance(
                      state, PhaseDressing::random_smooth(4, seed), observables) < 1e-12);
    }
    SUBCASE("dressings are seed-reproducible") {
        const RealField2D a1 = PhaseDressing::random_smooth(4, 42).sample(g);
        const RealField2D a2 = PhaseDressing::random_smooth(4, 42).sample(g);
        for (std::size_t i = 0; i < a1.values.size(); ++i)
            CHECK(a1.values[i] == a2.values[i]);
    }
    SUBCASE("two-point superposition: <q> = (q1+q2)/2 for any relative phase") {
        ComplexField2D f(g);
        const std::size_t i1 = 96, j1 = 128, i2 = 160, j2 = 128;
        for (double phase : {0.0, 0.7, kPi / 2.0, 2.5}) {
            f.values.assign(f.values.size(), Complex{0.0, 0.0});
            f.at(i1, j1) = Complex{1.0, 0.0};
            f.at(i2, j2) = Complex{std::cos(phase), std::sin(phase)};
            const KvnState two_point(f, 1.0);
            const double mean_q = expectation_multiplicative(two_point, observables[0]);
            const double want = 0.5 * (g.q_axis.point(i1) + g.q_axis.point(i2));
            CHECK(mean_q == doctest::Approx(want).epsilon(1e-13));
        }
    }
}

TEST_CASE("pure_vs_mixed_equivalence") {
    SUBCASE("d=2 hand value: diag(0.3, 0.7) with O = diag(1, -1) gives -0.4 on both routes") {
        // the deviation is |mixed - pure|; both must equal -0.4, so it vanishes
        CHECK(pure_vs_mixed_deviation({0.3, 0.7}, {{1.0, -1.0}}) < 1e-15);
        // and the common value is the weighted sum
        Eigen::VectorXcd psi(2);
        psi << std::sqrt(0.3), std::sqrt(0.7);
        const DensityOperator pure = DensityOperator::pure(FiniteState(psi, "bins"));
        Eigen::MatrixXcd o = Eigen::MatrixXcd::Zero(2, 2);
        o(0, 0) = 1.0;
        o(1, 1) = -1.0;
        CHECK((pure.matrix() * o).trace().real() == doctest::Approx(-0.4).epsilon(1e-14));
    }
    SUBCASE("identity observable gives 1") {
        CHECK(pure_vs_mixed_deviation({0.25, 0.25, 0.5}, {{1.0, 1.0, 1.0}}) < 1e-15);
    }
    SUBCASE("random diagonal ensemble at d=64") {
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        std::vector<double> w(64);
        for (double& x : w) x = u(rng);
        std::vector<std::vector<double>> obs(10, std::vector<double>(64));
        for (auto& o : obs)
            for (double& x : o) x = 2.0 * u(rng) - 1.0;
        CHECK(pure_vs_mixed_deviation(w, obs) < 1e-12);
    }
    SUBCASE("field front-end bins a Gaussian") {
        const Grid1D g(512, -8.0, 8.0);
        RealField1D psi(g);
        for (std::size_t i = 0; i < g.n; ++i)
            psi.values[i] = std::exp(-0.25 * g.point(i) * g.point(i));
        CHECK(pure_vs_mixed_equivalence(
                  psi, 64, {[](double x) { return x; }, [](double x) { return x * x; }}) <
              1e-12);
        RealField1D neg = psi;
        neg.values[3] = -0.1;
        CHECK_THROWS_AS(pure_vs_mixed_equivalence(neg, 16, {}), ParameterError);
    }
}

TEST_CASE("commutator_check: residual, refinement, skip path") {
    SUBCASE("Gaussian and Hermite-damped states at n=512 beat 1e-8") {
        const Grid1D g(512, -10.0, 10.0);
        std::vector<ComplexField1D> states;
        ComplexField1D gauss(g), hermite(g);
        for (std::size_t i = 0; i < g.n; ++i) {
            const double x = g.point(i);
            gauss.values[i] = std::exp(-0.5 * x * x);
            hermite.values[i] = x * x * std::exp(-0.5 * x * x);
        }
        states.push_back(gauss);
        states.push_back(hermite);
        const CommutatorResult r = commutator_check(g, states);
        REQUIRE(r.residuals.size() == 2);
        CHECK(r.max_residual < 1e-8);
    }

    SUBCASE("family residual decreases strictly from n=256 to n=1024") {
        double previous = 1.0;
        for (std::size_t n : {256, 512, 1024}) {
            const Grid1D g(n, -10.0, 10.0);
            const CommutatorResult r = commutator_check(g, commutator_test_family(g));
            CHECK(r.skipped.empty());
            CHECK(r.max_residual < previous);
            previous = r.max_residual;
        }
    }

    SUBCASE("state touching the boundary is flagged and skipped") {
        const Grid1D g(512, -10.0, 10.0);
        ComplexField1D edge(g);
        for (std::size_t i = 0; i < g.n; ++i) {
            const double x = g.point(i) - 9.5;
            edge.values[i] = std::exp(-2.0 * x * x);
        }
        const CommutatorResult r = commutator_check(g, {edge});
        REQUIRE(r.skipped.size() == 1);
        CHECK(r.residuals.empty());
        REQUIRE(r.warnings.size() == 1);
        CHECK(r.warnings[0].find("edge") != std::string::npos);
    }

    SUBCASE("non-band-limited state is flagged and skipped") {
        const Grid1D g(256, -10.0, 10.0);
        ComplexField1D sharp(g);
        for (std::size_t i = 0; i < g.n; ++i) {
            const double x = g.point(i);
            sharp.values[i] = std::abs(x) < 1.0 ? 1.0 : 0.0; // top hat: 1/lambda tail
        }
        const CommutatorResult r = commutator_check(g, {sharp});
        REQUIRE(r.skipped.size() == 1);
        CHECK(r.warnings[0].find("band-limited") != std::string::npos);
    }
}
