#pragma once

#include <variant>

#include "kvnlab/kvn.hpp"
#include "kvnlab/quantum.hpp"

namespace kvnlab {

/// The post-NSM object: eigenstate weights |psi(xi_0,0)|^2 over the
/// eigenvalue grid. Densities at later times follow from the propagated
/// eigenstate kernel laws, so no O(n^2) eigenstate sum is ever formed.
struct ContinuousMixture {
    enum class Theory { Qm, Kvn };

    Theory theory = Theory::Qm;
    double elapsed = 0.0;
    std::variant<RealField1D, RealField2D> weight_density;
};

ContinuousMixture nsm_collapse(const QmState& state);
ContinuousMixture nsm_collapse(const KvnState& state);

/// Non-selective position measurement in QM: the x-statistics at 0+ equal the
/// 0- ones; the p-density at 0+ and the x-density at tau flatten to the
/// box-regularized constants (|<p|x0>|^2 and the free kernel modulus are
/// x0-independent).
struct NsmQmReport {
    double tau = 0.0;
    double box_length = 0.0;
    double hbar = 1.0;
    double mass = 1.0;

    RealField1D rho_x_before;     // rho(x|0-)
    RealField1D rho_x_after;      // rho(x|0+)
    RealField1D rho_p_before;     // rho(p|0-)
    RealField1D rho_p_after;      // rho(p|0+), constant 1/L_p
    RealField1D rho_x_tau;        // rho(x|tau), constant 1/box_length
    RealField1D rho_x_pure_tau;   // unmeasured reference rho_P(x|tau)

    double flat_p_value = 0.0;        // 1/L_p on the conjugate box
    double flat_x_value = 0.0;        // 1/box_length
    double l1_pure_vs_flat = 0.0;     // L1(rho_P(x|tau), flat)
};

NsmQmReport nsm_x_qm(const QmState& initial, double tau, double box_length);

/// Non-selective phi measurement in KvN: the phi-statistics never change; the
/// lambda-density at 0+ flattens. The measured branch transports the weight
/// density along the free flow, the unmeasured branch evolves the wave — the
/// two must agree.
struct NsmKvnReport {
    double tau = 0.0;
    double mass = 1.0;

    RealField2D rho_phi_before;    // rho(phi|0-)
    RealField2D rho_phi_after;     // rho(phi|0+)
    RealField2D rho_lambda_before; // rho(lambda|0-)
    RealField2D rho_lambda_after;  // rho(lambda|0+), constant
    RealField2D rho_phi_tau;       // measured branch rho_M(phi|tau)
    RealField2D rho_phi_pure_tau;  // unmeasured reference rho_P(phi|tau)

    double flat_lambda_value = 0.0;
    double l1_measured_vs_pure = 0.0; // L1(rho_M(phi|tau), rho_P(phi|tau))
};

NsmKvnReport nsm_phi_kvn(const KvnState& initial, double tau);

} // namespace kvnlab
