#pragma once

#include <optional>
#include <utility>

#include "kvnlab/field.hpp"

namespace kvnlab {

/// KvN wave on the (q,p) grid. Construction normalizes.
struct KvnState {
    ComplexField2D field;
    double mass = 1.0;

    KvnState() = default;
    KvnState(ComplexField2D f, double mass_);
};

/// H(q,p) and its gradient, either analytic (free, harmonic) or sampled.
struct HamiltonianSpec {
    enum class Kind { Free, Harmonic, Custom };

    Kind kind = Kind::Free;
    double mass = 1.0;
    double omega = 1.0;
    std::optional<RealField2D> dq_h; // Custom only
    std::optional<RealField2D> dp_h;

    static HamiltonianSpec free_particle(double mass);
    static HamiltonianSpec harmonic(double mass, double omega);
    static HamiltonianSpec custom(RealField2D dq_h, RealField2D dp_h, double mass);
};

/// psi(phi,0) = (pi a b)^(-1/2) exp(-q^2/(2a^2) - (p - p_i)^2/(2b^2)).
KvnState gaussian_phase_space(const Grid2D& grid, double a, double b, double p_i,
                              double mass = 1.0);

enum class ShiftMethod { Auto, Roll, Fourier, Bicubic };

/// Which concrete shift evolve_free_exact would use for this tau under Auto.
ShiftMethod resolve_shift_method(const KvnState& state, double tau);
const char* shift_method_name(ShiftMethod m);

/// Free-particle Liouville transport: psi(q,p,tau) = psi(q - p tau/m, p, 0).
/// Rows shift by an exact cell roll when the displacement is commensurate,
/// otherwise by the requested method (Fourier by default).
KvnState evolve_free_exact(const KvnState& state, double tau,
                           ShiftMethod method = ShiftMethod::Auto);

/// Same transport applied to a real density (used by the measurement module's
/// mixed-branch evolution).
RealField2D shear_density(const RealField2D& density, double tau, double mass,
                          ShiftMethod method = ShiftMethod::Auto);

/// Semi-Lagrangian transport for a general Hamiltonian: each node backtracks
/// its characteristic with `steps` RK4 substeps and samples the initial field
/// once through bicubic interpolation. Points that leave the box read zero;
/// if that loses more than 0.1% of the norm the box was too small and a
/// DataError reports the offending node fraction.
KvnState evolve_characteristics(const KvnState& state, const HamiltonianSpec& h, double tau,
                                std::size_t steps);

RealField2D phi_density(const KvnState& state);
RealField1D q_marginal(const KvnState& state);
RealField1D p_marginal(const KvnState& state);

/// |psi_bar|^2 over (lambda_q, lambda_p).
RealField2D lambda_density(const KvnState& state);
RealField1D lambda_q_marginal(const KvnState& state);

/// values = modulus * exp(i phase), phase in (-pi, pi], zero where the
/// modulus is below 1e-14.
std::pair<RealField2D, RealField2D> phase_modulus_split(const KvnState& state);

} // namespace kvnlab
