#include "kvnlab/nsm.hpp"

#include <cmath>

#include "kvnlab/errors.hpp"

namespace kvnlab {

ContinuousMixture nsm_collapse(const QmState& state) {
    return ContinuousMixture{ContinuousMixture::Theory::Qm, 0.0, position_density(state)};
}

ContinuousMixture nsm_collapse(const KvnState& state) {
    return ContinuousMixture{ContinuousMixture::Theory::Kvn, 0.0, phi_density(state)};
}

NsmQmReport nsm_x_qm(const QmState& initial, double tau, double box_length) {
    if (!(tau > 0.0))
        throw ParameterError("nsm_x_qm: tau must be positive (the free-kernel density "
                             "degenerates at tau = 0)");
    if (!(box_length > 0.0)) throw ParameterError("nsm_x_qm: box_length must be positive");

    NsmQmReport report;
    report.tau = tau;
    report.box_length = box_length;
    report.hbar = initial.hbar;
    report.mass = initial.mass;

    report.rho_x_before = position_density(initial);
    report.rho_p_before = momentum_density(initial);

    // NSM of x: the mixture's x-weights are the 0- density itself.
    const ContinuousMixture mixture = nsm_collapse(initial);
    report.rho_x_after = std::get<RealField1D>(mixture.weight_density);

    // Each |x0> is flat in p, so the mixture's p-density is the
    // box-regularized constant on the conjugate grid.
    const Grid1D p_grid = conjugate_grid(initial.field.grid, initial.hbar);
    report.flat_p_value = 1.0 / p_grid.length();
    report.rho_p_after = RealField1D(p_grid, std::vector<double>(p_grid.n, report.flat_p_value));

    // |K_free(x,tau;x0)|^2 = m/(2 pi hbar tau) for every (x, x0), so the
    // evolved mixture is flat; regularized to the requested box.
    report.flat_x_value = 1.0 / box_length;
    report.rho_x_tau = RealField1D(initial.field.grid,
                                   std::vector<double>(initial.field.grid.n, report.flat_x_value));

    report.rho_x_pure_tau = position_density(evolve_free(initial, tau));

    double l1 = 0.0;
    for (double v : report.rho_x_pure_tau.values) l1 += std::abs(v - report.flat_x_value);
    report.l1_pure_vs_flat = l1 * initial.field.grid.spacing();
    return report;
}

NsmKvnReport nsm_phi_kvn(const KvnState& initial, double tau) {
    if (!(tau >= 0.0) || !std::isfinite(tau))
        throw ParameterError("nsm_phi_kvn: tau must be finite and nonnegative");

    NsmKvnReport report;
    report.tau = tau;
    report.mass = initial.mass;

    report.rho_phi_before = phi_density(initial);
    report.rho_lambda_before = lambda_density(initial);

    const ContinuousMixture mixture = nsm_collapse(initial);
    report.rho_phi_after = std::get<RealField2D>(mixture.weight_density);

    const Grid2D lambda_grid(conjugate_grid(initial.field.grid.q_axis, 1.0),
                             conjugate_grid(initial.field.grid.p_axis, 1.0));
    report.flat_lambda_value =
        1.0 / (lambda_grid.q_axis.length() * lambda_grid.p_axis.length());
    report.rho_lambda_after = RealField2D(
        lambda_grid, std::vector<double>(lambda_grid.size(), report.flat_lambda_value));

    // Measured branch: a Dirac delta in phi stays a delta on the flow, so the
    // mixture density is the transported weight field. Unmeasured branch:
    // evolve the wave and take the modulus square. Two independent paths.
    report.rho_phi_tau = shear_density(report.rho_phi_after, tau, initial.mass);
    report.rho_phi_pure_tau = phi_density(evolve_free_exact(initial, tau));

    report.l1_measured_vs_pure = l1_distance(report.rho_phi_tau, report.rho_phi_pure_tau);
    return report;
}

} // namespace kvnlab
