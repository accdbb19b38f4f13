#pragma once

#include <vector>

#include "kpb/spectral/field.hpp"
#include "kpb/spectral/symbol.hpp"

namespace kpb::evolution {

using spectral::cplx;
using spectral::Grid2D;
using spectral::SpectralField2D;
using spectral::SymbolParams;

/// Fourier multiplier of the linear flow at a fixed time t:
///   m(xi, eta) = exp(i t P(xi, eta) - xi^2 |t|)        (dissipation on)
///   m(xi, eta) = exp(i t P(xi, eta))                   (dissipation off, unitary group)
/// Negative t is allowed; the damping always uses |t|, so |m| <= 1 either way.
class EvolutionOperator {
public:
    EvolutionOperator(const Grid2D& grid, double t, const SymbolParams& params);

    const Grid2D& grid() const { return grid_; }
    double time() const { return t_; }
    cplx multiplier(std::size_t i) const { return m_[i]; }

    SpectralField2D apply(const SpectralField2D& phi) const;
    /// In-place variant on raw coefficients laid out like the grid.
    void apply_inplace(std::vector<cplx>& coeffs) const;

private:
    Grid2D grid_;
    double t_;
    std::vector<cplx> m_;
};

SpectralField2D apply_evolution(const SpectralField2D& phi, double t, const SymbolParams& params);

}  // namespace kpb::evolution
