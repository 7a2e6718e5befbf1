#include "kvnlab/field.hpp"

#include <cmath>
#include <cstdlib>

#include "kvnlab/errors.hpp"

namespace kvnlab {

ComplexField1D::ComplexField1D(const Grid1D& g, std::vector<Complex> v)
    : grid(g), values(std::move(v)) {
    if (values.size() != grid.n)
        throw ParameterError("ComplexField1D: value count does not match grid");
}

RealField1D::RealField1D(const Grid1D& g, std::vector<double> v)
    : grid(g), values(std::move(v)) {
    if (values.size() != grid.n)
        throw ParameterError("RealField1D: value count does not match grid");
}

ComplexField2D::ComplexField2D(const Grid2D& g, std::vector<Complex> v)
    : grid(g), values(std::move(v)) {
    if (values.size() != grid.size())
        throw ParameterError("ComplexField2D: value count does not match grid");
}

RealField2D::RealField2D(const Grid2D& g, std::vector<double> v)
    : grid(g), values(std::move(v)) {
    if (values.size() != grid.size())
        throw ParameterError("RealField2D: value count does not match grid");
}

double norm_sq(const ComplexField1D& f) {
    double s = 0.0;
    for (const Complex& v : f.values) s += std::norm(v);
    return s * f.grid.spacing();
}

double norm_sq(const ComplexField2D& f) {
    double s = 0.0;
    for (const Complex& v : f.values) s += std::norm(v);
    return s * f.grid.cell_area();
}

double integral(const RealField1D& f) {
    double s = 0.0;
    for (double v : f.values) s += v;
    return s * f.grid.spacing();
}

double integral(const RealField2D& f) {
    double s = 0.0;
    for (double v : f.values) s += v;
    return s * f.grid.cell_area();
}

double l1_distance(const RealField1D& a, const RealField1D& b) {
    if (!(a.grid == b.grid))
        throw ParameterError("l1_distance: fields on different grids");
    double s = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) s += std::abs(a.values[i] - b.values[i]);
    return s * a.grid.spacing();
}

double l1_distance(const RealField2D& a, const RealField2D& b) {
    if (!(a.grid == b.grid))
        throw ParameterError("l1_distance: fields on different grids");
    double s = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) s += std::abs(a.values[i] - b.values[i]);
    return s * a.grid.cell_area();
}

RealField1D modulus_squared(const ComplexField1D& f) {
    RealField1D out(f.grid);
    for (std::size_t i = 0; i < f.values.size(); ++i) out.values[i] = std::norm(f.values[i]);
    return out;
}

RealField2D modulus_squared(const ComplexField2D& f) {
    RealField2D out(f.grid);
    for (std::size_t i = 0; i < f.values.size(); ++i) out.values[i] = std::norm(f.values[i]);
    return out;
}

double boundary_mass(const RealField1D& density, double fraction) {
    const std::size_t n = density.grid.n;
    std::size_t k = static_cast<std::size_t>(fraction * static_cast<double>(n));
    if (k == 0) k = 1;
    double s = 0.0;
    for (std::size_t i = 0; i < k; ++i) s += density.values[i] + density.values[n - 1 - i];
    return s * density.grid.spacing();
}

double boundary_mass(const RealField2D& density, double fraction) {
    const std::size_t nq = density.grid.q_axis.n;
    const std::size_t np = density.grid.p_axis.n;
    std::size_t kq = static_cast<std::size_t>(fraction * static_cast<double>(nq));
    std::size_t kp = static_cast<std::size_t>(fraction * static_cast<double>(np));
    if (kq == 0) kq = 1;
    if (kp == 0) kp = 1;
    double s = 0.0;
    for (std::size_t iq = 0; iq < nq; ++iq)
        for (std::size_t ip = 0; ip < np; ++ip)
            if (iq < kq || iq >= nq - kq || ip < kp || ip >= np - kp)
                s += density.at(iq, ip);
    return s * density.grid.cell_area();
}

RealField1D marginal_q(const RealField2D& density) {
    const Grid2D& g = density.grid;
    RealField1D out(g.q_axis);
    for (std::size_t iq = 0; iq < g.q_axis.n; ++iq) {
        double s = 0.0;
        for (std::size_t ip = 0; ip < g.p_axis.n; ++ip) s += density.at(iq, ip);
        out.values[iq] = s * g.p_axis.spacing();
    }
    return out;
}

RealField1D marginal_p(const RealField2D& density) {
    const Grid2D& g = density.grid;
    RealField1D out(g.p_axis);
    for (std::size_t ip = 0; ip < g.p_axis.n; ++ip) {
        double s = 0.0;
        for (std::size_t iq = 0; iq < g.q_axis.n; ++iq) s += density.at(iq, ip);
        out.values[ip] = s * g.q_axis.spacing();
    }
    return out;
}

void throw_if_not_finite(const ComplexField1D& f, const char* who) {
    for (const Complex& v : f.values)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw DataError(std::string(who) + ": field has non-finite entries");
}

void throw_if_not_finite(const ComplexField2D& f, const char* who) {
    for (const Complex& v : f.values)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw DataError(std::string(who) + ": field has non-finite entries");
}

} // namespace kvnlab
