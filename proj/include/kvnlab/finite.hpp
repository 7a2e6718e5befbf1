#pragma once

#include <Eigen/Dense>
#include <string>

namespace kvnlab {

/// Normalized state vector on a finite basis.
struct FiniteState {
    Eigen::VectorXcd amplitudes;
    std::string basis_label;

    FiniteState(Eigen::VectorXcd amps, std::string label);
};

/// Observable given by an orthonormal eigenbasis (columns) and eigenvalues.
struct FiniteObservable {
    Eigen::MatrixXcd eigenvectors;
    Eigen::VectorXd eigenvalues;

    FiniteObservable(Eigen::MatrixXcd vectors, Eigen::VectorXd values);
};

/// Hermitian, positive semidefinite, unit-trace matrix.
class DensityOperator {
public:
    explicit DensityOperator(Eigen::MatrixXcd matrix);
    static DensityOperator pure(const FiniteState& state);

    const Eigen::MatrixXcd& matrix() const { return matrix_; }
    Eigen::Index dim() const { return matrix_.rows(); }
    double purity() const; // Tr rho^2

private:
    Eigen::MatrixXcd matrix_;
};

/// |<e_k|psi>|^2.
double born_probability(const FiniteState& state, const FiniteObservable& obs, Eigen::Index k);

/// Tr[rho |e_k><e_k|].
double outcome_probability(const DensityOperator& rho, const FiniteObservable& obs,
                           Eigen::Index k);

/// rho -> sum_k <e_k|rho|e_k> |e_k><e_k|. Idempotent, trace-preserving,
/// diagonal-preserving in the measured basis.
DensityOperator nonselective_dephase(const DensityOperator& rho, const FiniteObservable& obs);

/// rho -> U rho U^dagger.
DensityOperator evolve(const DensityOperator& rho, const Eigen::MatrixXcd& unitary);

struct TwoLevelResult {
    double p_pure = 0.0;
    double p_mixed = 0.0;
};

/// Two-level exercise: energies (+hw, -hw) in the {|+>,|->} basis, initial
/// state (1/2, sqrt(3/4)), observable with eigenvectors (|+>±|->)/sqrt(2).
/// Branch 1 evolves to 2*tau and measures; branch 2 dephases at tau first.
TwoLevelResult two_level_experiment(double omega_tau);

/// The closed forms the experiment must reproduce.
double two_level_pure_closed_form(double omega_tau);
double two_level_mixed_closed_form(double omega_tau);

} // namespace kvnlab
