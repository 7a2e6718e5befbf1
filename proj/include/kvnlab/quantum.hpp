#pragma once

#include "kvnlab/field.hpp"

namespace kvnlab {

/// Wavefunction on an x-grid. Construction normalizes; evolutions are unitary
/// and return new states.
struct QmState {
    ComplexField1D field;
    double hbar = 1.0;
    double mass = 1.0;

    QmState() = default;
    QmState(ComplexField1D f, double hbar_, double mass_);
};

/// psi(x,0) = (sqrt(pi) a)^(-1/2) exp(-x^2/(2 a^2) + i p_i x / hbar).
QmState gaussian_packet(const Grid1D& grid, double a, double p_i, double hbar = 1.0,
                        double mass = 1.0);

/// Free evolution: multiplies the momentum representation by
/// exp(-i p^2 tau / (2 m hbar)). Exact per mode.
QmState evolve_free(const QmState& state, double tau);

/// Strang split (half potential, full kinetic, half potential) over `steps`
/// substeps. Matches evolve_free when the potential vanishes.
QmState evolve_split_step(const QmState& state, const RealField1D& potential, double tau,
                          std::size_t steps);

RealField1D position_density(const QmState& state);
RealField1D momentum_density(const QmState& state);
ComplexField1D momentum_representation(const QmState& state);

} // namespace kvnlab
