#include "kpb/spectral/symbol.hpp"

#include "kpb/common/error.hpp"

namespace kpb::spectral {

double evaluate_symbol(double xi, double eta, const SymbolParams& params) {
    if (xi == 0.0) throw DomainError("evaluate_symbol: P(xi, eta) is singular at xi = 0");
    return xi * xi * xi + params.lambda() * eta * eta / xi;
}

std::complex<double> linear_rate(double xi, double eta, const SymbolParams& params) {
    if (xi == 0.0) return {0.0, 0.0};
    const double damping = params.dissipation ? xi * xi : 0.0;
    return {-damping, evaluate_symbol(xi, eta, params)};
}

}  // namespace kpb::spectral
