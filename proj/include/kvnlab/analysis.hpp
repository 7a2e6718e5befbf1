#pragma once

#include <vector>

#include "kvnlab/field.hpp"

namespace kvnlab {

struct Moments {
    double mean = 0.0;
    double variance = 0.0;
};

/// Quadrature mean/variance of a probability density. The density must be
/// nonnegative (tolerance -1e-12 relative to its peak) and integrate to 1
/// within 1e-6; it is renormalized internally before the moments are taken.
Moments moments(const RealField1D& density);

enum class ExtremumKind { Maximum, Minimum };

struct Extremum {
    double position = 0.0;
    ExtremumKind kind = ExtremumKind::Maximum;
    double value = 0.0;
    double contrast = 0.0;
};

/// Strict interior extrema whose contrast against the larger neighboring
/// opposite extremum exceeds the threshold. Contrast for a maximum v with
/// neighboring minima m1, m2 is (v - max(m1,m2))/v; for a minimum v with
/// neighboring maxima M1, M2 it is (max(M1,M2) - v)/max(M1,M2). Both are
/// scale-invariant. Plateaus (runs of equal samples) count once, at their
/// midpoint. Sorted by position.
std::vector<Extremum> local_extrema(const RealField1D& density, double contrast_threshold);

} // namespace kvnlab
