#include "kvnlab/finite.hpp"

#include <cmath>

#include "kvnlab/errors.hpp"

namespace kvnlab {

FiniteState::FiniteState(Eigen::VectorXcd amps, std::string label)
    : amplitudes(std::move(amps)), basis_label(std::move(label)) {
    if (amplitudes.size() < 2) throw ParameterError("FiniteState: dimension must be >= 2");
    const double n = amplitudes.norm();
    if (std::abs(n - 1.0) > 1e-12)
        throw ParameterError("FiniteState: amplitudes must be unit norm within 1e-12");
}

FiniteObservable::FiniteObservable(Eigen::MatrixXcd vectors, Eigen::VectorXd values)
    : eigenvectors(std::move(vectors)), eigenvalues(std::move(values)) {
    if (eigenvectors.rows() != eigenvectors.cols())
        throw ParameterError("FiniteObservable: eigenvector matrix must be square");
    if (eigenvalues.size() != eigenvectors.cols())
        throw ParameterError("FiniteObservable: eigenvalue count mismatch");
    const Eigen::MatrixXcd gram = eigenvectors.adjoint() * eigenvectors;
    const double defect =
        (gram - Eigen::MatrixXcd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
    if (defect > 1e-12)
        throw ParameterError("FiniteObservable: columns are not orthonormal within 1e-12");
}

DensityOperator::DensityOperator(Eigen::MatrixXcd matrix) : matrix_(std::move(matrix)) {
    if (matrix_.rows() != matrix_.cols())
        throw ParameterError("DensityOperator: matrix must be square");
    const double herm_defect = (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
    if (herm_defect > 1e-12)
        throw ParameterError("DensityOperator: matrix is not Hermitian within 1e-12");
    const double trace_defect = std::abs(matrix_.trace() - std::complex<double>{1.0, 0.0});
    if (trace_defect > 1e-12)
        throw ParameterError("DensityOperator: trace must be 1 within 1e-12");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(matrix_, Eigen::EigenvaluesOnly);
    if (solver.eigenvalues().minCoeff() < -1e-10)
        throw ParameterError("DensityOperator: matrix is not positive semidefinite");
}

DensityOperator DensityOperator::pure(const FiniteState& state) {
    return DensityOperator(state.amplitudes * state.amplitudes.adjoint());
}

double DensityOperator::purity() const { return (matrix_ * matrix_).trace().real(); }

double born_probability(const FiniteState& state, const FiniteObservable& obs, Eigen::Index k) {
    if (k < 0 || k >= obs.eigenvectors.cols())
        throw ParameterError("born_probability: outcome index out of range");
    if (state.amplitudes.size() != obs.eigenvectors.rows())
        throw ParameterError("born_probability: dimension mismatch");
    return std::norm(obs.eigenvectors.col(k).dot(state.amplitudes));
}

double outcome_probability(const DensityOperator& rho, const FiniteObservable& obs,
                           Eigen::Index k) {
    if (k < 0 || k >= obs.eigenvectors.cols())
        throw ParameterError("outcome_probability: outcome index out of range");
    const Eigen::VectorXcd e = obs.eigenvectors.col(k);
    return (e.adjoint() * rho.matrix() * e)(0).real();
}

DensityOperator nonselective_dephase(const DensityOperator& rho, const FiniteObservable& obs) {
    if (rho.dim() != obs.eigenvectors.rows())
        throw ParameterError("nonselective_dephase: dimension mismatch");
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(rho.dim(), rho.dim());
    for (Eigen::Index k = 0; k < obs.eigenvectors.cols(); ++k) {
        const Eigen::VectorXcd e = obs.eigenvectors.col(k);
        const double pk = (e.adjoint() * rho.matrix() * e)(0).real();
        out += pk * (e * e.adjoint());
    }
    return DensityOperator(std::move(out));
}

DensityOperator evolve(const DensityOperator& rho, const Eigen::MatrixXcd& unitary) {
    return DensityOperator(unitary * rho.matrix() * unitary.adjoint());
}

namespace {

Eigen::MatrixXcd two_level_unitary(double omega_t) {
    // Energies +hw, -hw in the {|+>,|->} basis; phases exp(-i E t / hbar).
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(2, 2);
    u(0, 0) = std::polar(1.0, -omega_t);
    u(1, 1) = std::polar(1.0, omega_t);
    return u;
}

FiniteObservable two_level_observable() {
    const double r = 1.0 / std::sqrt(2.0);
    Eigen::MatrixXcd v(2, 2);
    v << r, r, r, -r; // columns |a>, |b>
    Eigen::VectorXd w(2);
    w << 1.0, -1.0;
    return FiniteObservable(std::move(v), std::move(w));
}

} // namespace

TwoLevelResult two_level_experiment(double omega_tau) {
    if (!std::isfinite(omega_tau))
        throw ParameterError("two_level_experiment: omega_tau must be finite");

    Eigen::VectorXcd init(2);
    init << std::complex<double>{0.5, 0.0}, std::complex<double>{std::sqrt(0.75), 0.0};
    const FiniteState psi0(init, "energy");
    const FiniteObservable omega_hat = two_level_observable();
    const Eigen::MatrixXcd u_tau = two_level_unitary(omega_tau);

    TwoLevelResult result;

    // Branch 1: unitary evolution to 2*tau, then Born probability of outcome a.
    const FiniteState psi2(u_tau * u_tau * psi0.amplitudes, psi0.basis_label);
    result.p_pure = born_probability(psi2, omega_hat, 0);

    // Branch 2: evolve to tau, dephase in the observable basis, evolve to
    // 2*tau, then read the outcome-a probability from the mixture.
    DensityOperator rho = DensityOperator::pure(psi0);
    rho = evolve(rho, u_tau);
    rho = nonselective_dephase(rho, omega_hat);
    rho = evolve(rho, u_tau);
    result.p_mixed = outcome_probability(rho, omega_hat, 0);

    return result;
}

double two_level_pure_closed_form(double omega_tau) {
    return 0.5 * (1.0 + std::sqrt(0.75) * std::cos(4.0 * omega_tau));
}

double two_level_mixed_closed_form(double omega_tau) {
    const double c = std::cos(2.0 * omega_tau);
    return 0.5 * (1.0 + std::sqrt(0.75) * c * c);
}

} // namespace kvnlab
