#pragma once

#include <complex>

namespace kpb::spectral {

/// Selects the transverse dispersion sign of P(xi, eta) = xi^3 + lambda * eta^2 / xi.
///
/// With the transform convention u = sum c e^{i(xi x + eta y)}, the KPB-I equation
/// (u_t + u_xxx - u_xx + u u_x)_x - u_yy = 0 has linear symbol i P_{+1} - xi^2,
/// so `Positive` is the default.
enum class DispersionSign : int { Positive = 1, Negative = -1 };

struct SymbolParams {
    DispersionSign sign = DispersionSign::Positive;
    bool dissipation = true;

    double lambda() const { return static_cast<double>(static_cast<int>(sign)); }
};

/// P_lambda(xi, eta) = xi^3 + lambda eta^2 / xi. Throws DomainError at xi = 0.
double evaluate_symbol(double xi, double eta, const SymbolParams& params);

/// Linear rate of the semigroup at (xi, eta): i P - xi^2 (or i P without dissipation).
/// Returns 0 on the xi = 0 column, which carries no content.
std::complex<double> linear_rate(double xi, double eta, const SymbolParams& params);

}  // namespace kpb::spectral
