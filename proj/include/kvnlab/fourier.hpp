#pragma once

#include <functional>

#include "kvnlab/field.hpp"

namespace kvnlab {

/// psi_bar(p) = 1/sqrt(2*pi*hbar) * integral dx psi(x) exp(-i p x / hbar),
/// evaluated on conjugate_grid(f.grid, hbar). Parseval holds to rounding.
ComplexField1D dft_x_to_p(const ComplexField1D& f, double hbar);

/// Inverse of dft_x_to_p back onto the given x-grid (must be the grid whose
/// conjugate matches f.grid).
ComplexField1D idft_p_to_x(const ComplexField1D& f, double hbar, const Grid1D& x_grid);

/// 2D transform with kernel exp(-i lambda.phi)/(2*pi) — the lambda scale
/// carries no hbar, matching [phi, lambda] = i.
ComplexField2D dft2_phi_to_lambda(const ComplexField2D& f);
ComplexField2D idft2_lambda_to_phi(const ComplexField2D& f, const Grid2D& phi_grid);

/// Applies a multiplier g(k) in the conjugate representation:
/// f -> idft( g(k) * dft(f) ). Used for spectral derivatives and kinetic
/// propagators.
ComplexField1D apply_conjugate_multiplier(const ComplexField1D& f, double hbar,
                                          const std::function<Complex(double)>& g);

/// lambda_hat f = -i df/dx via the unit-scale spectral derivative.
ComplexField1D spectral_lambda_apply(const ComplexField1D& f);

/// Relative spectral mass in the outer (1 - band_fraction) of the conjugate
/// band; small values mean the field is band-limited on this grid.
double spectral_tail_mass(const ComplexField1D& f, double band_fraction = 0.875);

/// Cyclic shift by an integer number of cells: out[i] = in[i - k mod n].
void roll_inplace(std::vector<Complex>& row, long long k);

/// f(x) -> f(x - d) through the shift theorem (exact for band-limited rows).
void fourier_shift_inplace(std::vector<Complex>& row, const Grid1D& grid, double displacement);

} // namespace kvnlab
