#pragma once

#include "kpb/illposed/counterexample.hpp"
#include "kpb/spectral/field.hpp"

namespace kpb::illposed {

/// Periodic-grid version of phi_N: each coefficient is the integral of phi^_N over
/// the mode's frequency cell (dxi x deta), so grid sums approximate the continuous
/// convolution.
spectral::SpectralField2D phi_on_grid(const CounterexampleSpec& spec, const spectral::Grid2D& grid);

/// Output-window H^{s,0} norm of a grid field, reading c / (dxi deta) as the density
/// and weighting each mode by its cell's overlap with the window.
double windowed_grid_norm(const spectral::SpectralField2D& u, double N, double s);

}  // namespace kpb::illposed
