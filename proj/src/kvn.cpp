#include "kvnlab/kvn.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kvnlab/errors.hpp"
#include "kvnlab/fourier.hpp"

namespace kvnlab {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

KvnState::KvnState(ComplexField2D f, double mass_) : field(std::move(f)), mass(mass_) {
    if (!(mass > 0.0) || !std::isfinite(mass))
        throw ParameterError("KvnState: mass must be finite and positive");
    throw_if_not_finite(field, "KvnState");
    const double n2 = norm_sq(field);
    if (!(n2 > 0.0)) throw DataError("KvnState: zero-norm field");
    const double scale = 1.0 / std::sqrt(n2);
    for (Complex& v : field.values) v *= scale;
}

HamiltonianSpec HamiltonianSpec::free_particle(double mass) {
    HamiltonianSpec h;
    h.kind = Kind::Free;
    h.mass = mass;
    return h;
}

HamiltonianSpec HamiltonianSpec::harmonic(double mass, double omega) {
    if (!(omega > 0.0)) throw ParameterError("HamiltonianSpec: omega must be positive");
    HamiltonianSpec h;
    h.kind = Kind::Harmonic;
    h.mass = mass;
    h.omega = omega;
    return h;
}

HamiltonianSpec HamiltonianSpec::custom(RealField2D dq_h, RealField2D dp_h, double mass) {
    for (double v : dq_h.values)
        if (!std::isfinite(v)) throw ParameterError("HamiltonianSpec: dq_h has NaN/Inf");
    for (double v : dp_h.values)
        if (!std::isfinite(v)) throw ParameterError("HamiltonianSpec: dp_h has NaN/Inf");
    HamiltonianSpec h;
    h.kind = Kind::Custom;
    h.mass = mass;
    h.dq_h = std::move(dq_h);
    h.dp_h = std::move(dp_h);
    return h;
}

KvnState gaussian_phase_space(const Grid2D& grid, double a, double b, double p_i, double mass) {
    if (!(a > 0.0) || !(b > 0.0))
        throw ParameterError("gaussian_phase_space: widths a, b must be positive");
    ComplexField2D f(grid);
    const double amp = 1.0 / std::sqrt(kPi * a * b);
    for (std::size_t iq = 0; iq < grid.q_axis.n; ++iq) {
        const double q = grid.q_axis.point(iq);
        const double gq = std::exp(-q * q / (2.0 * a * a));
        for (std::size_t ip = 0; ip < grid.p_axis.n; ++ip) {
            const double dp = grid.p_axis.point(ip) - p_i;
            f.at(iq, ip) = amp * gq * std::exp(-dp * dp / (2.0 * b * b));
        }
    }
    const double n2 = norm_sq(f);
    if (std::abs(n2 - 1.0) > 1e-8)
        throw DataError("gaussian_phase_space: box does not hold the packet (norm " +
                        std::to_string(n2) + "); enlarge the box");
    return KvnState(std::move(f), mass);
}

namespace {

bool all_rows_roll(const Grid2D& grid, double tau, double mass) {
    // Every row displacement p_j*tau/m is an integer cell count iff
    // tau*dp/(m*dq) is an integer and p_min*tau/(m*dq) is an integer.
    const double dq = grid.q_axis.spacing();
    const double r = tau * grid.p_axis.spacing() / (mass * dq);
    const double s = tau * grid.p_axis.x_min / (mass * dq);
    return std::abs(r - std::round(r)) < 1e-12 && std::abs(s - std::round(s)) < 1e-12;
}

// 4-point Lagrange weights at fractional offset t from the second node.
inline void cubic_weights(double t, double w[4]) {
    w[0] = -t * (t - 1.0) * (t - 2.0) / 6.0;
    w[1] = (t * t - 1.0) * (t - 2.0) / 2.0;
    w[2] = -t * (t + 1.0) * (t - 2.0) / 2.0;
    w[3] = t * (t * t - 1.0) / 6.0;
}

void bicubic_shift_row(std::vector<Complex>& row, double cells) {
    const std::size_t n = row.size();
    const double base = std::floor(cells);
    double w[4];
    cubic_weights(cells - base, w);
    const long long k = static_cast<long long>(base);
    std::vector<Complex> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        // out[i] = in(i - cells): periodic indexing.
        const long long j0 = static_cast<long long>(i) - k;
        Complex acc{0.0, 0.0};
        for (int s = -1; s <= 2; ++s) {
            long long j = j0 - s;
            j %= static_cast<long long>(n);
            if (j < 0) j += static_cast<long long>(n);
            acc += w[s + 1] * row[static_cast<std::size_t>(j)];
        }
        out[i] = acc;
    }
    row = std::move(out);
}

template <typename Shift>
void shear_rows(ComplexField2D& f, double tau, double mass, const Shift& shift) {
    const std::size_t nq = f.grid.q_axis.n;
    const std::size_t np = f.grid.p_axis.n;
    std::vector<Complex> row(nq);
    for (std::size_t ip = 0; ip < np; ++ip) {
        const double displacement = f.grid.p_axis.point(ip) * tau / mass;
        for (std::size_t iq = 0; iq < nq; ++iq) row[iq] = f.at(iq, ip);
        shift(row, displacement);
        for (std::size_t iq = 0; iq < nq; ++iq) f.at(iq, ip) = row[iq];
    }
}

void apply_shear(ComplexField2D& f, double tau, double mass, ShiftMethod method) {
    const Grid1D& qg = f.grid.q_axis;
    if (method == ShiftMethod::Auto)
        method = all_rows_roll(f.grid, tau, mass) ? ShiftMethod::Roll : ShiftMethod::Fourier;
    switch (method) {
        case ShiftMethod::Roll:
            shear_rows(f, tau, mass, [&qg](std::vector<Complex>& row, double d) {
                const double cells = d / qg.spacing();
                const double nearest = std::round(cells);
                if (std::abs(cells - nearest) > 1e-9)
                    throw ParameterError("evolve_free_exact: roll requested for an "
                                         "incommensurate displacement");
                roll_inplace(row, static_cast<long long>(nearest));
            });
            break;
        case ShiftMethod::Fourier:
            shear_rows(f, tau, mass, [&qg](std::vector<Complex>& row, double d) {
                fourier_shift_inplace(row, qg, d);
            });
            break;
        case ShiftMethod::Bicubic:
            shear_rows(f, tau, mass, [&qg](std::vector<Complex>& row, double d) {
                bicubic_shift_row(row, d / qg.spacing());
            });
            break;
        case ShiftMethod::Auto:
            break;
    }
}

} // namespace

ShiftMethod resolve_shift_method(const KvnState& state, double tau) {
    return all_rows_roll(state.field.grid, tau, state.mass) ? ShiftMethod::Roll
                                                            : ShiftMethod::Fourier;
}

const char* shift_method_name(ShiftMethod m) {
    switch (m) {
        case ShiftMethod::Auto: return "auto";
        case ShiftMethod::Roll: return "roll";
        case ShiftMethod::Fourier: return "fourier";
        case ShiftMethod::Bicubic: return "bicubic";
    }
    return "?";
}

KvnState evolve_free_exact(const KvnState& state, double tau, ShiftMethod method) {
    if (!std::isfinite(tau)) throw ParameterError("evolve_free_exact: tau must be finite");
    if (tau == 0.0) return state;
    KvnState out = state;
    apply_shear(out.field, tau, state.mass, method);
    return out;
}

RealField2D shear_density(const RealField2D& density, double tau, double mass,
                          ShiftMethod method) {
    if (tau == 0.0) return density;
    ComplexField2D work(density.grid);
    for (std::size_t i = 0; i < density.values.size(); ++i)
        work.values[i] = Complex{density.values[i], 0.0};
    apply_shear(work, tau, mass, method);
    RealField2D out(density.grid);
    for (std::size_t i = 0; i < work.values.size(); ++i) out.values[i] = work.values[i].real();
    return out;
}

namespace {

struct FlowRhs {
    const HamiltonianSpec& h;

    // Backward flow: d(q,p)/ds = (-dH/dp, +dH/dq).
    void operator()(double q, double p, double& dq, double& dp) const {
        switch (h.kind) {
            case HamiltonianSpec::Kind::Free:
                dq = -p / h.mass;
                dp = 0.0;
                break;
            case HamiltonianSpec::Kind::Harmonic:
                dq = -p / h.mass;
                dp = h.mass * h.omega * h.omega * q;
                break;
            case HamiltonianSpec::Kind::Custom:
                dq = -bilinear(*h.dp_h, q, p);
                dp = bilinear(*h.dq_h, q, p);
                break;
        }
    }

    static double bilinear(const RealField2D& f, double q, double p) {
        const Grid1D& qg = f.grid.q_axis;
        const Grid1D& pg = f.grid.p_axis;
        const double uq = (q - qg.x_min) / qg.spacing();
        const double up = (p - pg.x_min) / pg.spacing();
        const double fq = std::clamp(uq, 0.0, static_cast<double>(qg.n - 1));
        const double fp = std::clamp(up, 0.0, static_cast<double>(pg.n - 1));
        const std::size_t i0 = std::min(static_cast<std::size_t>(fq), qg.n - 2);
        const std::size_t j0 = std::min(static_cast<std::size_t>(fp), pg.n - 2);
        const double tq = fq - static_cast<double>(i0);
        const double tp = fp - static_cast<double>(j0);
        return (1 - tq) * (1 - tp) * f.at(i0, j0) + tq * (1 - tp) * f.at(i0 + 1, j0) +
               (1 - tq) * tp * f.at(i0, j0 + 1) + tq * tp * f.at(i0 + 1, j0 + 1);
    }
};

// Bicubic sample with zero extension outside the box. Returns false when the
// point itself lies outside (beyond the stencil's reach of valid data).
bool bicubic_sample(const ComplexField2D& f, double q, double p, Complex& out) {
    const Grid1D& qg = f.grid.q_axis;
    const Grid1D& pg = f.grid.p_axis;
    const double uq = (q - qg.x_min) / qg.spacing();
    const double up = (p - pg.x_min) / pg.spacing();
    const bool inside = uq >= 0.0 && uq <= static_cast<double>(qg.n - 1) && up >= 0.0 &&
                        up <= static_cast<double>(pg.n - 1);
    if (!inside) {
        out = Complex{0.0, 0.0};
        return false;
    }
    const double bq = std::floor(uq);
    const double bp = std::floor(up);
    double wq[4], wp[4];
    cubic_weights(uq - bq, wq);
    cubic_weights(up - bp, wp);
    const long long iq0 = static_cast<long long>(bq);
    const long long ip0 = static_cast<long long>(bp);
    Complex acc{0.0, 0.0};
    for (int sq = -1; sq <= 2; ++sq) {
        const long long iq = iq0 + sq;
        if (iq < 0 || iq >= static_cast<long long>(qg.n)) continue;
        Complex rowacc{0.0, 0.0};
        for (int sp = -1; sp <= 2; ++sp) {
            const long long ip = ip0 + sp;
            if (ip < 0 || ip >= static_cast<long long>(pg.n)) continue;
            rowacc += wp[sp + 1] * f.at(static_cast<std::size_t>(iq), static_cast<std::size_t>(ip));
        }
        acc += wq[sq + 1] * rowacc;
    }
    out = acc;
    return true;
}

} // namespace

KvnState evolve_characteristics(const KvnState& state, const HamiltonianSpec& h, double tau,
                                std::size_t steps) {
    if (steps < 1) throw ParameterError("evolve_characteristics: steps must be >= 1");
    if (!std::isfinite(tau)) throw ParameterError("evolve_characteristics: tau must be finite");
    if (std::abs(h.mass - state.mass) > 1e-12 * std::max(1.0, state.mass))
        throw ParameterError("evolve_characteristics: Hamiltonian mass differs from the state");
    if (tau == 0.0) return state;

    const Grid2D& grid = state.field.grid;
    const double dt = tau / static_cast<double>(steps);
    const FlowRhs rhs{h};
    ComplexField2D out(grid);
    std::size_t out_of_box = 0;

    for (std::size_t iq = 0; iq < grid.q_axis.n; ++iq) {
        for (std::size_t ip = 0; ip < grid.p_axis.n; ++ip) {
            double q = grid.q_axis.point(iq);
            double p = grid.p_axis.point(ip);
            for (std::size_t s = 0; s < steps; ++s) {
                double k1q, k1p, k2q, k2p, k3q, k3p, k4q, k4p;
                rhs(q, p, k1q, k1p);
                rhs(q + 0.5 * dt * k1q, p + 0.5 * dt * k1p, k2q, k2p);
                rhs(q + 0.5 * dt * k2q, p + 0.5 * dt * k2p, k3q, k3p);
                rhs(q + dt * k3q, p + dt * k3p, k4q, k4p);
                q += dt / 6.0 * (k1q + 2.0 * k2q + 2.0 * k3q + k4q);
                p += dt / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
            }
            Complex v;
            if (!bicubic_sample(state.field, q, p, v)) ++out_of_box;
            out.at(iq, ip) = v;
        }
    }

    const double n_before = norm_sq(state.field);
    const double n_after = norm_sq(out);
    if (out_of_box > 0 && std::abs(n_after - n_before) > 1e-3 * n_before) {
        const double frac = static_cast<double>(out_of_box) / static_cast<double>(grid.size());
        throw DataError("evolve_characteristics: characteristics of " + std::to_string(frac) +
                        " of the nodes leave the box and carry mass; enlarge the box");
    }

    KvnState result = state;
    result.field = std::move(out);
    return result;
}

RealField2D phi_density(const KvnState& state) { return modulus_squared(state.field); }

RealField1D q_marginal(const KvnState& state) {
    const Grid2D& g = state.field.grid;
    RealField1D out(g.q_axis);
    for (std::size_t iq = 0; iq < g.q_axis.n; ++iq) {
        double s = 0.0;
        for (std::size_t ip = 0; ip < g.p_axis.n; ++ip) s += std::norm(state.field.at(iq, ip));
        out.values[iq] = s * g.p_axis.spacing();
    }
    return out;
}

RealField1D p_marginal(const KvnState& state) {
    const Grid2D& g = state.field.grid;
    RealField1D out(g.p_axis);
    for (std::size_t ip = 0; ip < g.p_axis.n; ++ip) {
        double s = 0.0;
        for (std::size_t iq = 0; iq < g.q_axis.n; ++iq) s += std::norm(state.field.at(iq, ip));
        out.values[ip] = s * g.q_axis.spacing();
    }
    return out;
}

RealField2D lambda_density(const KvnState& state) {
    return modulus_squared(dft2_phi_to_lambda(state.field));
}

RealField1D lambda_q_marginal(const KvnState& state) {
    RealField2D dens = lambda_density(state);
    const Grid2D& g = dens.grid;
    RealField1D out(g.q_axis);
    for (std::size_t iq = 0; iq < g.q_axis.n; ++iq) {
        double s = 0.0;
        for (std::size_t ip = 0; ip < g.p_axis.n; ++ip) s += dens.at(iq, ip);
        out.values[iq] = s * g.p_axis.spacing();
    }
    return out;
}

std::pair<RealField2D, RealField2D> phase_modulus_split(const KvnState& state) {
    RealField2D modulus(state.field.grid);
    RealField2D phase(state.field.grid);
    for (std::size_t i = 0; i < state.field.values.size(); ++i) {
        const Complex v = state.field.values[i];
        const double m = std::abs(v);
        modulus.values[i] = m;
        if (m < 1e-14) {
            phase.values[i] = 0.0;
        } else {
            double ph = std::arg(v);
            if (ph <= -kPi) ph = kPi; // report phase in (-pi, pi]
            phase.values[i] = ph;
        }
    }
    return {std::move(modulus), std::move(phase)};
}

} // namespace kvnlab
