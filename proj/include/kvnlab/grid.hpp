#pragma once

#include <cstddef>
#include <string>

#include "kvnlab/errors.hpp"

namespace kvnlab {

/// Uniform periodic grid: sample i sits at x_min + i*spacing, i in [0, n).
/// x_max is the box end, not a sample; n must be a power of two >= 8 so the
/// transforms can use a fast algorithm.
struct Grid1D {
    std::size_t n = 0;
    double x_min = 0.0;
    double x_max = 0.0;

    Grid1D() = default;

    Grid1D(std::size_t n_, double x_min_, double x_max_)
        : n(n_), x_min(x_min_), x_max(x_max_) {
        if (n < 8 || (n & (n - 1)) != 0)
            throw ParameterError("Grid1D: n must be a power of two >= 8, got " +
                                 std::to_string(n));
        if (!(x_max > x_min))
            throw ParameterError("Grid1D: x_max must exceed x_min");
    }

    double spacing() const { return (x_max - x_min) / static_cast<double>(n); }
    double length() const { return x_max - x_min; }
    double point(std::size_t i) const { return x_min + static_cast<double>(i) * spacing(); }

    bool operator==(const Grid1D&) const = default;
};

/// Conjugate (transform) grid: spacing 2*pi*hbar/(n*dx), centered at 0.
inline Grid1D conjugate_grid(const Grid1D& g, double hbar = 1.0) {
    if (!(hbar > 0.0))
        throw ParameterError("conjugate_grid: hbar must be positive");
    const double dk = 2.0 * 3.14159265358979323846 * hbar / (static_cast<double>(g.n) * g.spacing());
    const double k_min = -0.5 * static_cast<double>(g.n) * dk;
    return Grid1D(g.n, k_min, -k_min);
}

/// Phase-space grid over (q, p).
struct Grid2D {
    Grid1D q_axis;
    Grid1D p_axis;

    Grid2D() = default;
    Grid2D(Grid1D q, Grid1D p) : q_axis(q), p_axis(p) {}

    std::size_t size() const { return q_axis.n * p_axis.n; }
    double cell_area() const { return q_axis.spacing() * p_axis.spacing(); }

    bool operator==(const Grid2D&) const = default;
};

} // namespace kvnlab
