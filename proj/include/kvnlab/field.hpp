#pragma once

#include <complex>
#include <vector>

#include "kvnlab/grid.hpp"

namespace kvnlab {

using Complex = std::complex<double>;

struct ComplexField1D {
    Grid1D grid;
    std::vector<Complex> values;

    ComplexField1D() = default;
    explicit ComplexField1D(const Grid1D& g) : grid(g), values(g.n, Complex{0.0, 0.0}) {}
    ComplexField1D(const Grid1D& g, std::vector<Complex> v);
};

struct RealField1D {
    Grid1D grid;
    std::vector<double> values;

    RealField1D() = default;
    explicit RealField1D(const Grid1D& g) : grid(g), values(g.n, 0.0) {}
    RealField1D(const Grid1D& g, std::vector<double> v);
};

/// Row-major over (q, p): values[iq * n_p + ip].
struct ComplexField2D {
    Grid2D grid;
    std::vector<Complex> values;

    ComplexField2D() = default;
    explicit ComplexField2D(const Grid2D& g) : grid(g), values(g.size(), Complex{0.0, 0.0}) {}
    ComplexField2D(const Grid2D& g, std::vector<Complex> v);

    Complex& at(std::size_t iq, std::size_t ip) { return values[iq * grid.p_axis.n + ip]; }
    const Complex& at(std::size_t iq, std::size_t ip) const { return values[iq * grid.p_axis.n + ip]; }
};

struct RealField2D {
    Grid2D grid;
    std::vector<double> values;

    RealField2D() = default;
    explicit RealField2D(const Grid2D& g) : grid(g), values(g.size(), 0.0) {}
    RealField2D(const Grid2D& g, std::vector<double> v);

    double& at(std::size_t iq, std::size_t ip) { return values[iq * grid.p_axis.n + ip]; }
    const double& at(std::size_t iq, std::size_t ip) const { return values[iq * grid.p_axis.n + ip]; }
};

/// Midpoint quadrature of |f|^2 over the box.
double norm_sq(const ComplexField1D& f);
double norm_sq(const ComplexField2D& f);

/// Midpoint quadrature of a real field over the box.
double integral(const RealField1D& f);
double integral(const RealField2D& f);

double l1_distance(const RealField1D& a, const RealField1D& b);
double l1_distance(const RealField2D& a, const RealField2D& b);

/// |f|^2 pointwise, as a density field.
RealField1D modulus_squared(const ComplexField1D& f);
RealField2D modulus_squared(const ComplexField2D& f);

/// Quadrature mass inside the outermost `fraction` of the box on each side.
double boundary_mass(const RealField1D& density, double fraction = 0.01);
double boundary_mass(const RealField2D& density, double fraction = 0.01);

/// Axis marginals of a 2D density.
RealField1D marginal_q(const RealField2D& density);
RealField1D marginal_p(const RealField2D& density);

void throw_if_not_finite(const ComplexField1D& f, const char* who);
void throw_if_not_finite(const ComplexField2D& f, const char* who);

} // namespace kvnlab
