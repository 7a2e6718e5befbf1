#include <doctest.h>

#include <cmath>
#include <random>

#include "kvnlab/analysis.hpp"
#include "kvnlab/errors.hpp"
#include "kvnlab/finite.hpp"
#include "kvnlab/nsm.hpp"
#include "oracles.hpp"

using namespace kvnlab;

namespace {

constexpr double kPi = 3.14159265358979323846;
const double kPA0 = 0.5 + std::sqrt(3.0) / 4.0; // 0.93301270189221935

FiniteState section_state() {
    Eigen::VectorXcd v(2);
    v << std::complex<double>{0.5, 0.0}, std::complex<double>{std::sqrt(0.75), 0.0};
    return FiniteState(v, "energy");
}

FiniteObservable section_observable() {
    const double r = 1.0 / std::sqrt(2.0);
    Eigen::MatrixXcd m(2, 2);
    m << r, r, r, -r;
    Eigen::VectorXd w(2);
    w << 1.0, -1.0;
    return FiniteObservable(m, w);
}

DensityOperator random_density(std::size_t d, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n(0.0, 1.0);
    Eigen::MatrixXcd a(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) a(i, j) = std::complex<double>{n(rng), n(rng)};
    Eigen::MatrixXcd rho = a * a.adjoint();
    rho /= rho.trace().real();
    rho = 0.5 * (rho + Eigen::MatrixXcd(rho.adjoint())); // kill rounding skew
    return DensityOperator(rho);
}

FiniteObservable random_observable(std::size_t d, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n(0.0, 1.0);
    Eigen::MatrixXcd a(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) a(i, j) = std::complex<double>{n(rng), n(rng)};
    const Eigen::HouseholderQR<Eigen::MatrixXcd> qr(a);
    Eigen::MatrixXcd q = qr.householderQ();
    Eigen::VectorXd w(d);
    for (std::size_t i = 0; i < d; ++i) w(i) = static_cast<double>(i);
    return FiniteObservable(q, w);
}

} // namespace

TEST_CASE("born_probability on the two-level initial state") {
    const FiniteState psi = section_state();
    const FiniteObservable omega = section_observable();
    CHECK(born_probability(psi, omega, 0) == doctest::Approx(kPA0).epsilon(1e-14));
    CHECK(born_probability(psi, omega, 1) == doctest::Approx(1.0 - kPA0).epsilon(1e-12));

    // eigenstate: probability 1
    const FiniteState a_state(omega.eigenvectors.col(0), "omega");
    CHECK(born_probability(a_state, omega, 0) == doctest::Approx(1.0).epsilon(1e-14));

    CHECK_THROWS_AS(born_probability(psi, omega, 2), ParameterError);
    CHECK_THROWS_AS(born_probability(psi, omega, -1), ParameterError);

    // probabilities sum to 1
    CHECK(born_probability(psi, omega, 0) + born_probability(psi, omega, 1) ==
          doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("nonselective_dephase: section values, idempotence, invariants") {
    const FiniteObservable omega = section_observable();
    const DensityOperator rho0 = DensityOperator::pure(section_state());

    SUBCASE("pure state dephases to diag(0.93301, 0.06699) in the omega basis") {
        const DensityOperator mixed = nonselective_dephase(rho0, omega);
        CHECK(outcome_probability(mixed, omega, 0) == doctest::Approx(kPA0).epsilon(1e-13));
        CHECK(outcome_probability(mixed, omega, 1) ==
              doctest::Approx(1.0 - kPA0).epsilon(1e-12));
        // off-diagonals vanish in the measured basis
        const Eigen::MatrixXcd in_basis =
            omega.eigenvectors.adjoint() * mixed.matrix() * omega.eigenvectors;
        CHECK(std::abs(in_basis(0, 1)) < 1e-14);
        CHECK(std::abs(in_basis(1, 0)) < 1e-14);
    }

    SUBCASE("already diagonal and maximally mixed are fixed points") {
        const DensityOperator mixed = nonselective_dephase(rho0, omega);
        const DensityOperator twice = nonselective_dephase(mixed, omega);
        CHECK((twice.matrix() - mixed.matrix()).cwiseAbs().maxCoeff() < 1e-14);

        const DensityOperator half(Eigen::MatrixXcd::Identity(2, 2) * 0.5);
        const DensityOperator still = nonselective_dephase(half, omega);
        CHECK((still.matrix() - half.matrix()).cwiseAbs().maxCoeff() < 1e-14);
    }

    SUBCASE("random states: trace, diagonal, purity, idempotence") {
        for (std::uint64_t seed = 1; seed <= 8; ++seed) {
            const std::size_t d = 2 + seed % 5;
            const DensityOperator rho = random_density(d, seed);
            const FiniteObservable obs = random_observable(d, seed * 31 + 7);
            const DensityOperator deph = nonselective_dephase(rho, obs);

            CHECK(std::abs(deph.matrix().trace().real() - 1.0) < 1e-12);
            CHECK(deph.purity() <= rho.purity() + 1e-12);
            for (Eigen::Index k = 0; k < static_cast<Eigen::Index>(d); ++k)
                CHECK(outcome_probability(deph, obs, k) ==
                      doctest::Approx(outcome_probability(rho, obs, k)).epsilon(1e-12));
            const DensityOperator again = nonselective_dephase(deph, obs);
            CHECK((again.matrix() - deph.matrix()).cwiseAbs().maxCoeff() < 1e-12);
        }
    }
}

TEST_CASE("two_level_experiment: closed forms, special points, equality set") {
    SUBCASE("omega_tau = 0: both probabilities are 0.93301") {
        const TwoLevelResult r = two_level_experiment(0.0);
        CHECK(r.p_pure == doctest::Approx(kPA0).epsilon(1e-14));
        CHECK(r.p_mixed == doctest::Approx(kPA0).epsilon(1e-14));
    }
    SUBCASE("omega_tau = pi/4: p_pure = 0.06699, p_mixed = 1/2") {
        const TwoLevelResult r = two_level_experiment(kPi / 4.0);
        CHECK(r.p_pure == doctest::Approx(0.5 * (1.0 - std::sqrt(0.75))).epsilon(1e-13));
        CHECK(r.p_mixed == doctest::Approx(0.5).epsilon(1e-13));
        CHECK(r.p_mixed - r.p_pure > 0.05); // the NSM visibly disturbs the statistics
    }
    SUBCASE("omega_tau = pi/2: both back to 0.93301") {
        const TwoLevelResult r = two_level_experiment(kPi / 2.0);
        CHECK(r.p_pure == doctest::Approx(kPA0).epsilon(1e-13));
        CHECK(r.p_mixed == doctest::Approx(kPA0).epsilon(1e-13));
    }
    SUBCASE("sweep: closed forms within 1e-12 for 129 points") {
        for (int k = 0; k <= 128; ++k) {
            const double wt = 2.0 * kPi * k / 128.0;
            const TwoLevelResult r = two_level_experiment(wt);
            CHECK(std::abs(r.p_pure - two_level_pure_closed_form(wt)) < 1e-12);
            CHECK(std::abs(r.p_mixed - two_level_mixed_closed_form(wt)) < 1e-12);
        }
    }
    SUBCASE("p_pure = p_mixed exactly on cos(2 omega tau) = +-1") {
        // cos4wt = cos^2(2wt) <=> 2c^2-1 = c^2 <=> c = +-1, i.e. wt = k*pi/2.
        for (double wt : {0.0, kPi / 2.0, kPi}) {
            const TwoLevelResult r = two_level_experiment(wt);
            CHECK(std::abs(r.p_pure - r.p_mixed) < 1e-12);
        }
        // elsewhere the branches genuinely differ
        for (double wt : {kPi / 6.0, kPi / 4.0, 1.0}) {
            const TwoLevelResult r = two_level_experiment(wt);
            CHECK(std::abs(r.p_pure - r.p_mixed) > 0.05);
        }
    }
}

TEST_CASE("nsm_x_qm: x-statistics kept, p flattened, tau density flat") {
    const Grid1D grid(2048, -10.0, 10.0);
    const QmState initial = gaussian_packet(grid, 1.0, 1.0);
    const NsmQmReport report = nsm_x_qm(initial, 1.0, grid.length());

    SUBCASE("rho(x|0+) is the Gaussian density, unchanged from 0-") {
        double max_err = 0.0, max_diff = 0.0;
        for (std::size_t i = 0; i < grid.n; ++i) {
            const double x = grid.point(i);
            max_err = std::max(max_err, std::abs(report.rho_x_after.values[i] -
                                                 std::exp(-x * x) / std::sqrt(kPi)));
            max_diff = std::max(max_diff, std::abs(report.rho_x_after.values[i] -
                                                   report.rho_x_before.values[i]));
        }
        CHECK(max_err < 1e-9);
        CHECK(max_diff < 1e-12);
    }

    SUBCASE("rho(p|0+) is flat at 1/L_p; rho(x|tau) flat at 1/L") {
        const Grid1D p_grid = conjugate_grid(grid, 1.0);
        CHECK(report.flat_p_value == doctest::Approx(1.0 / p_grid.length()).epsilon(1e-14));
        CHECK(report.flat_x_value == doctest::Approx(0.05).epsilon(1e-14));
        double lo = report.rho_p_after.values[0], hi = lo;
        for (double v : report.rho_p_after.values) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        CHECK(hi - lo < 1e-10);
        for (double v : report.rho_x_tau.values)
            CHECK(v == doctest::Approx(0.05).epsilon(1e-14));
    }

    SUBCASE("the unmeasured branch stays far from flat") {
        CHECK(report.l1_pure_vs_flat > 0.5);
    }

    SUBCASE("tau = 0 is rejected") {
        CHECK_THROWS_AS(nsm_x_qm(initial, 0.0, grid.length()), ParameterError);
    }
}

TEST_CASE("nsm_phi_kvn: phi-statistics invisible, lambda flattened") {
    const Grid2D grid(Grid1D(512, -14.0, 14.0), Grid1D(256, -8.0, 8.0));
    const KvnState initial = gaussian_phase_space(grid, 1.0, 1.0, 1.0);

    SUBCASE("tau=2: measured branch reproduces the paper's moments and the pure branch") {
        const NsmKvnReport report = nsm_phi_kvn(initial, 2.0);
        const Moments mq = moments(marginal_q(report.rho_phi_tau));
        const Moments mp = moments(marginal_p(report.rho_phi_tau));
        CHECK(mq.mean == doctest::Approx(2.0).epsilon(1e-7));
        CHECK(mq.variance == doctest::Approx(2.5).epsilon(1e-7));
        CHECK(mp.mean == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(mp.variance == doctest::Approx(0.5).epsilon(1e-9));
        CHECK(report.l1_measured_vs_pure < 1e-6);

        double lo = report.rho_lambda_after.values[0], hi = lo;
        for (double v : report.rho_lambda_after.values) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        CHECK(hi - lo < 1e-10);
    }

    SUBCASE("tau=0: measured and pure branches equal the initial density") {
        const NsmKvnReport report = nsm_phi_kvn(initial, 0.0);
        CHECK(l1_distance(report.rho_phi_tau, report.rho_phi_before) < 1e-12);
        CHECK(l1_distance(report.rho_phi_pure_tau, report.rho_phi_before) < 1e-12);
    }
}

TEST_CASE("continuous mixture weights are a normalized density") {
    const Grid1D grid(512, -10.0, 10.0);
    const ContinuousMixture mix = nsm_collapse(gaussian_packet(grid, 1.0, 0.0));
    CHECK(mix.theory == ContinuousMixture::Theory::Qm);
    const auto& w = std::get<RealField1D>(mix.weight_density);
    double lo = 0.0;
    for (double v : w.values) lo = std::min(lo, v);
    CHECK(lo >= 0.0);
    CHECK(integral(w) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("validation of the finite-dimensional types") {
    Eigen::VectorXcd bad(2);
    bad << 0.5, 0.5;
    CHECK_THROWS_AS(FiniteState(bad, "x"), ParameterError);

    Eigen::MatrixXcd not_orth(2, 2);
    not_orth << 1.0, 1.0, 0.0, 1.0;
    Eigen::VectorXd w(2);
    w << 1.0, -1.0;
    CHECK_THROWS_AS(FiniteObservable(not_orth, w), ParameterError);

    Eigen::MatrixXcd not_herm(2, 2);
    not_herm << std::complex<double>{0.5, 0.0}, std::complex<double>{0.1, 0.2},
        std::complex<double>{0.1, -0.1}, std::complex<double>{0.5, 0.0};
    CHECK_THROWS_AS((DensityOperator(not_herm)), ParameterError);

    Eigen::MatrixXcd neg(2, 2);
    neg << std::complex<double>{1.5, 0.0}, std::complex<double>{0.0, 0.0},
        std::complex<double>{0.0, 0.0}, std::complex<double>{-0.5, 0.0};
    CHECK_THROWS_AS((DensityOperator(neg)), ParameterError);
}
