#pragma once

#include "kpb/spectral/field.hpp"

namespace kpb::spectral {

/// Coefficients of the pointwise product u v with two-thirds dealiasing.
///
/// Both inputs are truncated to |j| <= nx/3, |k| <= ny/3 (strictly 3K < n) before
/// the physical-space product and the result is truncated again, so every
/// retained output mode equals the exact convolution of the truncated inputs.
/// The x-mean of the product is dropped by the zero-mass constraint.
/// Throws GridMismatch if the grids differ.
SpectralField2D dealiased_product(const SpectralField2D& u, const SpectralField2D& v);

/// d/dx: c(xi, eta) -> i xi c(xi, eta).
SpectralField2D x_derivative(const SpectralField2D& u);

/// Zeroes every mode outside the two-thirds band.
SpectralField2D dealias_truncate(const SpectralField2D& u);

/// Anisotropic Sobolev norm (lx ly sum <xi>^{2 s1} <eta>^{2 s2} |c|^2)^{1/2}.
double sobolev_norm(const SpectralField2D& u, double s1, double s2);

/// Plain L2 norm; equals sobolev_norm(u, 0, 0).
double l2_norm(const SpectralField2D& u);

}  // namespace kpb::spectral
