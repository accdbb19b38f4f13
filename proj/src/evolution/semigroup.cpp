#include "kpb/evolution/semigroup.hpp"

#include <cmath>
#include <stdexcept>

namespace kpb::evolution {

EvolutionOperator::EvolutionOperator(const Grid2D& grid, double t, const SymbolParams& params)
    : grid_(grid), t_(t), m_(grid.size(), cplx{1.0, 0.0}) {
    const double lambda = params.lambda();
    const double at = std::abs(t);
    for (std::size_t ix = 0; ix < grid.nx(); ++ix) {
        const double xi = grid.xi(ix);
        if (xi == 0.0) continue;
        const double damping = params.dissipation ? std::exp(-xi * xi * at) : 1.0;
        for (std::size_t iy = 0; iy < grid.ny(); ++iy) {
            const double eta = grid.eta(iy);
            const double p = xi * xi * xi + lambda * eta * eta / xi;
            m_[ix * grid.ny() + iy] = damping * std::polar(1.0, t * p);
        }
    }
}

SpectralField2D EvolutionOperator::apply(const SpectralField2D& phi) const {
    if (!(phi.grid() == grid_)) throw std::invalid_argument("EvolutionOperator: grid mismatch");
    std::vector<cplx> c(phi.coeffs().begin(), phi.coeffs().end());
    apply_inplace(c);
    return SpectralField2D(grid_, std::move(c));
}

void EvolutionOperator::apply_inplace(std::vector<cplx>& coeffs) const {
    for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] *= m_[i];
}

SpectralField2D apply_evolution(const SpectralField2D& phi, double t, const SymbolParams& params) {
    return EvolutionOperator(phi.grid(), t, params).apply(phi);
}

}  // namespace kpb::evolution
