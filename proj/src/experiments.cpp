#include "kvnlab/experiments.hpp"

#include <cmath>
#include <random>
#include <string>

#include "kvnlab/errors.hpp"
#include "kvnlab/finite.hpp"
#include "kvnlab/fourier.hpp"

namespace kvnlab {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

void TwoSlitConfig::validate() const {
    if (!(slit_half_width > 0.0) || !(slit_center > slit_half_width))
        throw ParameterError("TwoSlitConfig: slits must be disjoint (center > half_width > 0)");
    if (!(hbar > 0.0) || !(mass > 0.0))
        throw ParameterError("TwoSlitConfig: hbar and mass must be positive");
    if (!(t_final > 0.0)) throw ParameterError("TwoSlitConfig: t_final must be positive");
    if (!(kvn_p_sigma > 0.0)) throw ParameterError("TwoSlitConfig: kvn_p_sigma must be positive");
    const double total = amplitude * amplitude * 4.0 * slit_half_width;
    if (std::abs(total - 1.0) > 1e-12)
        throw ParameterError("TwoSlitConfig: amplitude^2 * 4 * half_width must equal 1, got " +
                             std::to_string(total));
}

namespace {

// Length of [lo, hi] covered by the two slits.
double slit_coverage(double lo, double hi, const TwoSlitConfig& cfg) {
    double covered = 0.0;
    for (const double c : {-cfg.slit_center, cfg.slit_center}) {
        const double a = std::max(lo, c - cfg.slit_half_width);
        const double b = std::min(hi, c + cfg.slit_half_width);
        if (b > a) covered += b - a;
    }
    return covered;
}

} // namespace

ComplexField1D two_slit_profile(const Grid1D& grid, const TwoSlitConfig& cfg) {
    cfg.validate();
    if (cfg.slit_center + cfg.slit_half_width >= grid.x_max ||
        -cfg.slit_center - cfg.slit_half_width <= grid.x_min)
        throw ParameterError("two_slit_profile: slits fall outside the box");
    ComplexField1D f(grid);
    const double dx = grid.spacing();
    for (std::size_t i = 0; i < grid.n; ++i) {
        const double x = grid.point(i);
        const double coverage = slit_coverage(x - 0.5 * dx, x + 0.5 * dx, cfg) / dx;
        if (coverage > 0.0) f.values[i] = cfg.amplitude * std::sqrt(coverage);
    }
    return f;
}

Complex two_slit_transform(double p, const TwoSlitConfig& cfg) {
    const double h = cfg.hbar;
    const double scale = cfg.amplitude / std::sqrt(2.0 * kPi * h);
    if (p == 0.0) return Complex{scale * 4.0 * cfg.slit_half_width, 0.0};
    const double value =
        scale * 4.0 * h * std::sin(p * cfg.slit_half_width / h) * std::cos(p * cfg.slit_center / h) / p;
    return Complex{value, 0.0};
}

double two_slit_momentum_density(double p, const TwoSlitConfig& cfg) {
    const double h = cfg.hbar;
    const double a2 = cfg.amplitude * cfg.amplitude;
    if (p == 0.0) return 8.0 * a2 * cfg.slit_half_width * cfg.slit_half_width / (kPi * h);
    const double s = std::sin(p * cfg.slit_half_width / h);
    const double c = std::cos(p * cfg.slit_center / h);
    return (8.0 * a2 * h / kPi) * s * s * c * c / (p * p);
}

TwoSlitQmReport two_slit_qm(const TwoSlitConfig& cfg, const Grid1D& grid) {
    cfg.validate();
    TwoSlitQmReport report;
    report.grid = grid;
    report.cfg = cfg;

    ComplexField1D profile = two_slit_profile(grid, cfg);
    report.rho_x_t0 = modulus_squared(profile);
    report.boundary_mass_t0 = boundary_mass(report.rho_x_t0);
    if (report.boundary_mass_t0 > 1e-6)
        throw DataError("two_slit_qm: profile mass at the box edge exceeds 1e-6; use a larger box");
    report.x0_moments = moments(report.rho_x_t0);

    // Momentum density from the exact transform of the piecewise-constant
    // profile (the grid DFT of the sampled discontinuity is only O(dx)
    // accurate; its error is reported separately).
    const Grid1D p_grid = conjugate_grid(grid, cfg.hbar);
    report.rho_p_t0 = RealField1D(p_grid);
    double closed_err = 0.0;
    for (std::size_t k = 0; k < p_grid.n; ++k) {
        const double p = p_grid.point(k);
        const double rho = std::norm(two_slit_transform(p, cfg));
        report.rho_p_t0.values[k] = rho;
        closed_err = std::max(closed_err, std::abs(rho - two_slit_momentum_density(p, cfg)));
    }
    report.closed_form_max_err = closed_err;

    {
        const QmState sampled(profile, cfg.hbar, cfg.mass);
        const RealField1D dft_density = momentum_density(sampled);
        double err = 0.0;
        for (std::size_t k = 0; k < p_grid.n; ++k)
            err = std::max(err,
                           std::abs(dft_density.values[k] - two_slit_momentum_density(
                                                                p_grid.point(k), cfg)));
        report.dft_vs_closed_max_err = err;
    }

    // Evolution on a 4x-padded box: the padded conjugate grid has the same
    // band but 4x finer spacing, so components fast enough to wrap land far
    // outside the report window instead of aliasing into the fringes.
    const std::size_t pad = 4;
    const double length = grid.length();
    const Grid1D grid_int(pad * grid.n, grid.x_min - 1.5 * length, grid.x_max + 1.5 * length);
    const Grid1D p_grid_int = conjugate_grid(grid_int, cfg.hbar);
    ComplexField1D bar(p_grid_int);
    for (std::size_t k = 0; k < p_grid_int.n; ++k) {
        const double p = p_grid_int.point(k);
        const double kinetic = -p * p * cfg.t_final / (2.0 * cfg.mass * cfg.hbar);
        bar.values[k] =
            two_slit_transform(p, cfg) * Complex{std::cos(kinetic), std::sin(kinetic)};
    }
    const ComplexField1D evolved_int = idft_p_to_x(bar, cfg.hbar, grid_int);

    const std::size_t offset = (pad - 1) * grid.n / 2;
    report.rho_x_t1 = RealField1D(grid);
    for (std::size_t i = 0; i < grid.n; ++i)
        report.rho_x_t1.values[i] = std::norm(evolved_int.values[offset + i]);
    report.boundary_mass_t1 = boundary_mass(report.rho_x_t1);

    report.extrema_p_t0 = local_extrema(report.rho_p_t0, 0.2);
    report.extrema_x_t1 = local_extrema(report.rho_x_t1, 0.2);
    return report;
}

TwoSlitKvnReport two_slit_kvn(const TwoSlitConfig& cfg, const Grid2D& grid) {
    cfg.validate();
    TwoSlitKvnReport report;
    report.grid = grid;
    report.cfg = cfg;

    const ComplexField1D slit = two_slit_profile(grid.q_axis, cfg);

    // chi(p): Gaussian of width kvn_p_sigma around p = 0 (the paper leaves the
    // p-profile open; this choice is recorded in the report).
    const Grid1D& pg = grid.p_axis;
    std::vector<double> chi(pg.n);
    const double b = cfg.kvn_p_sigma;
    const double amp = 1.0 / std::sqrt(b * std::sqrt(kPi));
    double chi_norm = 0.0;
    for (std::size_t ip = 0; ip < pg.n; ++ip) {
        const double p = pg.point(ip);
        chi[ip] = amp * std::exp(-p * p / (2.0 * b * b));
        chi_norm += chi[ip] * chi[ip];
    }
    chi_norm *= pg.spacing();
    if (std::abs(chi_norm - 1.0) > 1e-6)
        throw DataError("two_slit_kvn: p-grid does not resolve the kvn_p_sigma profile "
                        "(norm " + std::to_string(chi_norm) + ")");

    ComplexField2D wave(grid);
    for (std::size_t iq = 0; iq < grid.q_axis.n; ++iq)
        for (std::size_t ip = 0; ip < pg.n; ++ip)
            wave.at(iq, ip) = slit.values[iq] * chi[ip];
    const KvnState state(std::move(wave), cfg.mass);

    report.rho_x_t0 = q_marginal(state);
    report.rho_lambda_x_t0 = lambda_q_marginal(state);

    // The lambda_x distribution must reproduce the QM momentum density of the
    // same x-profile; lambda carries unit scale, so the reference transform
    // uses hbar = 1.
    ComplexField1D ref = dft_x_to_p(slit, 1.0);
    report.rho_p_qm_ref = modulus_squared(ref);
    double err = 0.0;
    for (std::size_t k = 0; k < ref.grid.n; ++k)
        err = std::max(err, std::abs(report.rho_lambda_x_t0.values[k] -
                                     report.rho_p_qm_ref.values[k]));
    report.qm_identity_max_err = err;

    report.shift_method = resolve_shift_method(state, cfg.t_final);
    const KvnState evolved = evolve_free_exact(state, cfg.t_final, report.shift_method);
    report.rho_x_t1 = q_marginal(evolved);

    report.extrema_lambda_t0 = local_extrema(report.rho_lambda_x_t0, 0.2);
    report.extrema_x_t1 = local_extrema(report.rho_x_t1, 0.05);
    return report;
}

PhaseDressing PhaseDressing::linear(double alpha, double beta) {
    PhaseDressing d;
    d.kind = Kind::Linear;
    d.alpha = alpha;
    d.beta = beta;
    return d;
}

PhaseDressing PhaseDressing::quadratic(double alpha, double beta, double gamma) {
    PhaseDressing d;
    d.kind = Kind::Quadratic;
    d.alpha = alpha;
    d.beta = beta;
    d.gamma = gamma;
    return d;
}

PhaseDressing PhaseDressing::random_smooth(unsigned modes, std::uint64_t seed) {
    if (modes == 0) throw ParameterError("PhaseDressing: modes must be >= 1");
    PhaseDressing d;
    d.kind = Kind::RandomSmooth;
    d.modes = modes;
    d.seed = seed;
    return d;
}

RealField2D PhaseDressing::sample(const Grid2D& grid) const {
    RealField2D a(grid);
    switch (kind) {
        case Kind::Linear:
            for (std::size_t iq = 0; iq < grid.q_axis.n; ++iq)
                for (std::size_t ip = 0; ip < grid.p_axis.n; ++ip)
                    a.at(iq, ip) = alpha * grid.q_axis.point(iq) + beta * grid.p_axis.point(ip);
            break;
        case Kind::Quadratic:
            for (std::size_t iq = 0; iq < grid.q_axis.n; ++iq)
                for (std::size_t ip = 0; ip < grid.p_axis.n; ++ip) {
                    const double q = grid.q_axis.point(iq);
                    const double p = grid.p_axis.point(ip);
                    a.at(iq, ip) = alpha * q * q + beta * p * p + gamma * q * p;
                }
            break;
        case Kind::RandomSmooth: {
            // Truncated Fourier series with seeded coefficients; periodic and
            // smooth on the box, replayable from the seed.
            std::mt19937_64 rng(seed);
            std::uniform_real_distribution<double> coeff(-1.0, 1.0);
            struct Term {
                double ck, sk;
                unsigned k, l;
            };
            std::vector<Term> terms;
            for (unsigned k = 0; k <= modes; ++k)
                for (unsigned l = 0; l <= modes; ++l) {
                    if (k == 0 && l == 0) continue;
                    const double damp = 1.0 / (1.0 + static_cast<double>(k * k + l * l));
                    terms.push_back({coeff(rng) * damp, coeff(rng) * damp, k, l});
                }
            for (std::size_t iq = 0; iq < grid.q_axis.n; ++iq) {
                const double u = (grid.q_axis.point(iq) - grid.q_axis.x_min) / grid.q_axis.length();
                for (std::size_t ip = 0; ip < grid.p_axis.n; ++ip) {
                    const double v =
                        (grid.p_axis.point(ip) - grid.p_axis.x_min) / grid.p_axis.length();
                    double s = 0.0;
                    for (const Term& t : terms) {
                        const double arg = 2.0 * kPi * (t.k * u + t.l * v);
                        s += t.ck * std::cos(arg) + t.sk * std::sin(arg);
                    }
                    a.at(iq, ip) = s;
                }
            }
            break;
        }
    }
    return a;
}

double expectation_multiplicative(const KvnState& state, const RealField2D& observable) {
    if (!(observable.grid == state.field.grid))
        throw ParameterError("expectation_multiplicative: observable grid mismatch");
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < observable.values.size(); ++i) {
        const double w = std::norm(state.field.values[i]);
        num += observable.values[i] * w;
        den += w;
    }
    return num / den;
}

double superselection_phase_invariance(const KvnState& state, const PhaseDressing& dressing,
                                       const std::vector<RealField2D>& observables) {
    const RealField2D a = dressing.sample(state.field.grid);
    KvnState dressed = state;
    for (std::size_t i = 0; i < dressed.field.values.size(); ++i)
        dressed.field.values[i] *= Complex{std::cos(a.values[i]), std::sin(a.values[i])};

    double worst = 0.0;
    for (const RealField2D& obs : observables) {
        const double bare = expectation_multiplicative(state, obs);
        const double with_phase = expectation_multiplicative(dressed, obs);
        // Scale: the mean magnitude of the observable, so zero-mean
        // observables do not blow the relative deviation up.
        double scale = 0.0, den = 0.0;
        for (std::size_t i = 0; i < obs.values.size(); ++i) {
            const double w = std::norm(state.field.values[i]);
            scale += std::abs(obs.values[i]) * w;
            den += w;
        }
        scale = std::max(scale / den, 1e-300);
        worst = std::max(worst, std::abs(bare - with_phase) / std::max(std::abs(bare), scale));
    }
    return worst;
}

double pure_vs_mixed_deviation(const std::vector<double>& weights,
                               const std::vector<std::vector<double>>& diagonal_observables) {
    const std::size_t d = weights.size();
    if (d < 2 || d > 64)
        throw ParameterError("pure_vs_mixed_deviation: dimension must lie in [2, 64]");
    double total = 0.0;
    for (double w : weights) {
        if (w < 0.0) throw ParameterError("pure_vs_mixed_deviation: weights must be nonnegative");
        total += w;
    }
    if (!(total > 0.0)) throw ParameterError("pure_vs_mixed_deviation: weights sum to zero");

    Eigen::MatrixXcd diag = Eigen::MatrixXcd::Zero(d, d);
    Eigen::VectorXcd sqrtw(d);
    for (std::size_t i = 0; i < d; ++i) {
        diag(i, i) = weights[i] / total;
        sqrtw(i) = std::sqrt(weights[i] / total);
    }
    const DensityOperator mixed(diag);
    const DensityOperator pure = DensityOperator::pure(FiniteState(sqrtw, "phi-bins"));

    double worst = 0.0;
    for (const std::vector<double>& obs : diagonal_observables) {
        if (obs.size() != d)
            throw ParameterError("pure_vs_mixed_deviation: observable dimension mismatch");
        Eigen::MatrixXcd o = Eigen::MatrixXcd::Zero(d, d);
        for (std::size_t i = 0; i < d; ++i) o(i, i) = obs[i];
        const double mixed_mean = (mixed.matrix() * o).trace().real();
        const double pure_mean = (pure.matrix() * o).trace().real();
        worst = std::max(worst, std::abs(mixed_mean - pure_mean));
    }
    return worst;
}

double pure_vs_mixed_equivalence(const RealField1D& psi, std::size_t d,
                                 const std::vector<std::function<double(double)>>& observables) {
    if (d < 2 || d > 64)
        throw ParameterError("pure_vs_mixed_equivalence: d must lie in [2, 64]");
    for (double v : psi.values)
        if (v < 0.0 || !std::isfinite(v))
            throw ParameterError("pure_vs_mixed_equivalence: psi must be real and nonnegative");

    const std::size_t per_bin = psi.grid.n / d;
    if (per_bin == 0) throw ParameterError("pure_vs_mixed_equivalence: more bins than samples");

    std::vector<double> weights(d, 0.0);
    std::vector<double> centers(d, 0.0);
    for (std::size_t b = 0; b < d; ++b) {
        for (std::size_t i = b * per_bin; i < (b + 1) * per_bin && i < psi.grid.n; ++i)
            weights[b] += psi.values[i] * psi.values[i] * psi.grid.spacing();
        centers[b] = 0.5 * (psi.grid.point(b * per_bin) +
                            psi.grid.point(std::min((b + 1) * per_bin, psi.grid.n) - 1));
    }
    std::vector<std::vector<double>> diag_obs;
    diag_obs.reserve(observables.size());
    for (const auto& fn : observables) {
        std::vector<double> o(d);
        for (std::size_t b = 0; b < d; ++b) o[b] = fn(centers[b]);
        diag_obs.push_back(std::move(o));
    }
    return pure_vs_mixed_deviation(weights, diag_obs);
}

CommutatorResult commutator_check(const Grid1D& grid,
                                  const std::vector<ComplexField1D>& test_states) {
    CommutatorResult result;
    for (std::size_t s = 0; s < test_states.size(); ++s) {
        const ComplexField1D& psi = test_states[s];
        if (!(psi.grid == grid))
            throw ParameterError("commutator_check: state " + std::to_string(s) +
                                 " is not on the given grid");
        const double n2 = norm_sq(psi);
        if (!(n2 > 0.0)) {
            result.skipped.push_back(s);
            result.warnings.push_back("state " + std::to_string(s) + ": zero norm, skipped");
            continue;
        }
        const double edge = boundary_mass(modulus_squared(psi), 0.05) / n2;
        if (edge > 1e-12) {
            result.skipped.push_back(s);
            result.warnings.push_back("state " + std::to_string(s) +
                                      ": support touches the box edge, skipped");
            continue;
        }
        const double tail = spectral_tail_mass(psi);
        if (tail > 1e-12) {
            result.skipped.push_back(s);
            result.warnings.push_back("state " + std::to_string(s) +
                                      ": not band-limited on this grid, skipped");
            continue;
        }

        const ComplexField1D lambda_psi = spectral_lambda_apply(psi);
        ComplexField1D x_psi = psi;
        for (std::size_t i = 0; i < grid.n; ++i) x_psi.values[i] *= grid.point(i);
        const ComplexField1D lambda_x_psi = spectral_lambda_apply(x_psi);

        ComplexField1D residual(grid);
        for (std::size_t i = 0; i < grid.n; ++i) {
            const Complex commutator =
                grid.point(i) * lambda_psi.values[i] - lambda_x_psi.values[i];
            residual.values[i] = commutator - Complex{0.0, 1.0} * psi.values[i];
        }
        const double r = std::sqrt(norm_sq(residual) / n2);
        result.residuals.push_back(r);
        result.max_residual = std::max(result.max_residual, r);
    }
    return result;
}

std::vector<ComplexField1D> commutator_test_family(const Grid1D& grid) {
    std::vector<ComplexField1D> family;
    auto push = [&](auto&& fn) {
        ComplexField1D f(grid);
        for (std::size_t i = 0; i < grid.n; ++i) f.values[i] = fn(grid.point(i));
        family.push_back(std::move(f));
    };
    push([](double x) { return std::exp(-0.5 * x * x); });
    push([](double x) { return x * std::exp(-0.5 * x * x); });
    push([](double x) { return x * x * std::exp(-0.5 * x * x); });
    // Compact C^4 bumps: their power-law spectral tails keep the residual
    // above the rounding floor through n = 1024, so refinement stays visible
    // (the pure Gaussian/Hermite members sit at the floor from n = 256 on).
    for (const double width : {6.0, 4.0}) {
        push([width](double x) {
            const double u = x / width;
            return std::abs(u) < 1.0 ? std::pow(1.0 - u * u, 5) : 0.0;
        });
    }
    return family;
}

} // namespace kvnlab
