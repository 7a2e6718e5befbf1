#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "kvnlab/analysis.hpp"
#include "kvnlab/kvn.hpp"
#include "kvnlab/quantum.hpp"

namespace kvnlab {

/// Double top-hat beam profile: amplitude on [c-w, c+w] and [-c-w, -c+w],
/// zero elsewhere; amplitude^2 * 4w must equal 1.
struct TwoSlitConfig {
    double slit_center = 1.0;
    double slit_half_width = 0.1;
    double amplitude = 1.5811388300841898; // sqrt(5/2)
    double hbar = 1.0;
    double mass = 1.0;
    double t_final = 1.0;
    double kvn_p_sigma = 0.05; // the KvN p-profile chi(p) is a Gaussian of this width

    void validate() const;
};

/// Equal-mass sampling of the discontinuous profile: interior cells carry the
/// full density, cells straddling a slit edge carry the covered fraction, so
/// the sampled density integrates to exactly 1.
ComplexField1D two_slit_profile(const Grid1D& grid, const TwoSlitConfig& cfg);

/// The transform of the exact piecewise-constant profile, evaluated at p:
/// psi_bar(p) = A/sqrt(2 pi hbar) * 4 hbar sin(p w/hbar) cos(p c/hbar) / p.
Complex two_slit_transform(double p, const TwoSlitConfig& cfg);

/// |psi_bar(p)|^2 in closed form: (8 A^2 w^2/(pi hbar)) * sinc-squared
/// structure; equals (20/pi) sin^2(p/10) cos^2(p) / p^2 at the defaults.
double two_slit_momentum_density(double p, const TwoSlitConfig& cfg);

struct TwoSlitQmReport {
    Grid1D grid;
    TwoSlitConfig cfg;
    RealField1D rho_x_t0;
    RealField1D rho_p_t0;
    RealField1D rho_x_t1;
    std::vector<Extremum> extrema_p_t0;
    std::vector<Extremum> extrema_x_t1;
    double closed_form_max_err = 0.0; // rho_p_t0 against the closed form
    double dft_vs_closed_max_err = 0.0; // sampled-profile DFT against the closed form
    double boundary_mass_t0 = 0.0;
    double boundary_mass_t1 = 0.0;
    Moments x0_moments;
};

/// Full quantum pipeline: profile, momentum density, free evolution to
/// t_final (computed on an internally 4x-padded box so the sharp profile's
/// fast components cannot wrap into the fringe window), extrema of both.
TwoSlitQmReport two_slit_qm(const TwoSlitConfig& cfg, const Grid1D& grid);

struct TwoSlitKvnReport {
    Grid2D grid;
    TwoSlitConfig cfg;
    RealField1D rho_x_t0;
    RealField1D rho_lambda_x_t0;
    RealField1D rho_x_t1;
    RealField1D rho_p_qm_ref; // QM momentum density of the same x-profile
    std::vector<Extremum> extrema_lambda_t0;
    std::vector<Extremum> extrema_x_t1;
    double qm_identity_max_err = 0.0; // rho_lambda_x_t0 vs rho_p_qm_ref
    ShiftMethod shift_method = ShiftMethod::Fourier;
};

/// KvN pipeline: product wave slit(q) * chi(p), lambda density at t=0,
/// phase-space shear to t_final, q-marginal extrema.
TwoSlitKvnReport two_slit_kvn(const TwoSlitConfig& cfg, const Grid2D& grid);

/// Real-valued phase to dress a KvN wave with: psi -> psi * exp(i A(q,p)).
struct PhaseDressing {
    enum class Kind { Linear, Quadratic, RandomSmooth };

    Kind kind = Kind::Linear;
    double alpha = 1.0;
    double beta = 0.0;
    double gamma = 0.0;
    unsigned modes = 4;          // RandomSmooth only
    std::uint64_t seed = 1;      // RandomSmooth only

    static PhaseDressing linear(double alpha, double beta);
    static PhaseDressing quadratic(double alpha, double beta, double gamma);
    static PhaseDressing random_smooth(unsigned modes, std::uint64_t seed);

    RealField2D sample(const Grid2D& grid) const;
};

/// <O> over |psi|^2 / norm.
double expectation_multiplicative(const KvnState& state, const RealField2D& observable);

/// Max over the observables of the relative deviation between <O> on psi and
/// on psi e^{iA}: zero for multiplicative observables up to rounding.
double superselection_phase_invariance(const KvnState& state, const PhaseDressing& dressing,
                                       const std::vector<RealField2D>& observables);

/// Diagonal mixture rho = diag(w) versus pure rho' = |psi><psi| with
/// psi = sqrt(w): max deviation of Tr[rho O]/Tr[rho] across the diagonal
/// observables. Exercises the DensityOperator machinery.
double pure_vs_mixed_deviation(const std::vector<double>& weights,
                               const std::vector<std::vector<double>>& diagonal_observables);

/// Field front-end: bins psi^2 (psi real, nonnegative) onto d <= 64 basis
/// states and evaluates the observables (functions of the bin center).
double pure_vs_mixed_equivalence(const RealField1D& psi, std::size_t d,
                                 const std::vector<std::function<double(double)>>& observables);

struct CommutatorResult {
    double max_residual = 0.0;
    std::vector<double> residuals;        // per accepted state
    std::vector<std::size_t> skipped;     // indices that failed the preconditions
    std::vector<std::string> warnings;
};

/// ||(x l - l x - i) psi|| / ||psi|| with the spectral lambda = -i d/dx.
/// States must be band-limited (spectral tail mass < 1e-12) and supported
/// away from the box edges; others are skipped with a warning.
CommutatorResult commutator_check(const Grid1D& grid,
                                  const std::vector<ComplexField1D>& test_states);

/// Gaussian/Hermite family plus compact C^3 bump members whose power-law
/// spectral tails keep the residual discretization-limited (visible above
/// rounding) across n = 256..1024.
std::vector<ComplexField1D> commutator_test_family(const Grid1D& grid);

} // namespace kvnlab
