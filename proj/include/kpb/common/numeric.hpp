#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace kpb {

using cplx = std::complex<double>;

/// Japanese bracket <x> = (1 + x^2)^{1/2}.
inline double bracket(double x) { return std::sqrt(1.0 + x * x); }

/// Pairwise (cascade) summation. The reduction tree depends only on the length,
/// so results are reproducible regardless of how the inputs were produced.
double pairwise_sum(std::span<const double> values);
cplx pairwise_sum(std::span<const cplx> values);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual_rms = 0.0;
};

/// Ordinary least squares y = intercept + slope * x. Requires at least two points.
LinearFit least_squares_line(std::span<const double> x, std::span<const double> y);

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

GaussRule gauss_legendre(std::size_t points);

/// Composite Gauss-Legendre rule on [a, b] with `panels` equal panels of
/// `points_per_panel` nodes each. Nodes are returned in increasing order.
GaussRule composite_gauss_legendre(double a, double b, std::size_t panels,
                                   std::size_t points_per_panel);

/// Chebyshev-Lobatto points mapped to [a, b], increasing, endpoints included.
std::vector<double> chebyshev_lobatto(double a, double b, std::size_t count);

/// Barycentric interpolation weights for Chebyshev-Lobatto points at `x` (length n).
/// Returns the coefficients c_i such that p(x) = sum_i c_i f_i.
std::vector<double> barycentric_coefficients(std::span<const double> nodes, double x);

}  // namespace kpb
