#include "kvnlab/quantum.hpp"

#include <cmath>
#include <string>

#include "kvnlab/errors.hpp"
#include "kvnlab/fourier.hpp"

namespace kvnlab {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

QmState::QmState(ComplexField1D f, double hbar_, double mass_)
    : field(std::move(f)), hbar(hbar_), mass(mass_) {
    if (!(hbar > 0.0) || !std::isfinite(hbar))
        throw ParameterError("QmState: hbar must be finite and positive");
    if (!(mass > 0.0) || !std::isfinite(mass))
        throw ParameterError("QmState: mass must be finite and positive");
    throw_if_not_finite(field, "QmState");
    const double n2 = norm_sq(field);
    if (!(n2 > 0.0)) throw DataError("QmState: zero-norm field");
    const double scale = 1.0 / std::sqrt(n2);
    for (Complex& v : field.values) v *= scale;
}

QmState gaussian_packet(const Grid1D& grid, double a, double p_i, double hbar, double mass) {
    if (!(a > 0.0)) throw ParameterError("gaussian_packet: width a must be positive");
    if (!(hbar > 0.0)) throw ParameterError("gaussian_packet: hbar must be positive");
    ComplexField1D f(grid);
    const double amp = 1.0 / std::sqrt(std::sqrt(kPi) * a);
    for (std::size_t i = 0; i < grid.n; ++i) {
        const double x = grid.point(i);
        const double phase = p_i * x / hbar;
        f.values[i] = amp * std::exp(-x * x / (2.0 * a * a)) *
                      Complex{std::cos(phase), std::sin(phase)};
    }
    const double n2 = norm_sq(f);
    if (std::abs(n2 - 1.0) > 1e-8)
        throw DataError("gaussian_packet: grid does not hold the packet (norm " +
                        std::to_string(n2) + "); widen the box or refine the grid");
    return QmState(std::move(f), hbar, mass);
}

QmState evolve_free(const QmState& state, double tau) {
    if (!(tau >= 0.0) || !std::isfinite(tau))
        throw ParameterError("evolve_free: tau must be finite and nonnegative");
    if (tau == 0.0) return state;
    const double hbar = state.hbar, mass = state.mass;
    ComplexField1D out = apply_conjugate_multiplier(
        state.field, hbar, [tau, hbar, mass](double p) {
            const double phase = -p * p * tau / (2.0 * mass * hbar);
            return Complex{std::cos(phase), std::sin(phase)};
        });
    QmState result = state;
    result.field = std::move(out);
    return result;
}

QmState evolve_split_step(const QmState& state, const RealField1D& potential, double tau,
                          std::size_t steps) {
    if (steps < 1) throw ParameterError("evolve_split_step: steps must be >= 1");
    if (!(tau >= 0.0)) throw ParameterError("evolve_split_step: tau must be nonnegative");
    if (!(potential.grid == state.field.grid))
        throw ParameterError("evolve_split_step: potential grid does not match the state");
    for (double v : potential.values)
        if (!std::isfinite(v)) throw DataError("evolve_split_step: potential has NaN/Inf");
    if (tau == 0.0) return state;

    const double dt = tau / static_cast<double>(steps);
    const double hbar = state.hbar, mass = state.mass;
    const std::size_t n = state.field.grid.n;

    std::vector<Complex> half_v(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double phase = -0.5 * potential.values[i] * dt / hbar;
        half_v[i] = Complex{std::cos(phase), std::sin(phase)};
    }

    ComplexField1D f = state.field;
    const auto kinetic = [dt, hbar, mass](double p) {
        const double phase = -p * p * dt / (2.0 * mass * hbar);
        return Complex{std::cos(phase), std::sin(phase)};
    };
    for (std::size_t s = 0; s < steps; ++s) {
        for (std::size_t i = 0; i < n; ++i) f.values[i] *= half_v[i];
        f = apply_conjugate_multiplier(f, hbar, kinetic);
        for (std::size_t i = 0; i < n; ++i) f.values[i] *= half_v[i];
    }
    QmState result = state;
    result.field = std::move(f);
    return result;
}

RealField1D position_density(const QmState& state) { return modulus_squared(state.field); }

ComplexField1D momentum_representation(const QmState& state) {
    return dft_x_to_p(state.field, state.hbar);
}

RealField1D momentum_density(const QmState& state) {
    return modulus_squared(momentum_representation(state));
}

} // namespace kvnlab
