#pragma once

#include "kpb/analysis/dyadic.hpp"
#include "kpb/analysis/spacetime.hpp"
#include "kpb/spectral/operators.hpp"
#include "kpb/spectral/symbol.hpp"

namespace kpb::analysis {

using spectral::SymbolParams;
using spectral::sobolev_norm;

struct NormSpec {
    double b = 0.5;
    double s1 = 0.0;
    double s2 = 0.0;
    /// Summation exponent over L; only 1 and 2 are supported.
    double q = 1.0;

    /// Throws DomainError unless q is 1 or 2 and the indices are finite.
    void validate() const;
};

/// phi_N(xi) applied to every mode (N = 1 is the low block eta(xi)).
SpectralField2D project_PN(const SpectralField2D& u, double n, const DyadicDecomposition& decomp);
SpaceTimeField project_PN(const SpaceTimeField& u, double n, const DyadicDecomposition& decomp);

/// Modulation block L applied per node: weight of block L at tau - P(xi, eta).
SpaceTimeField project_QL(const SpaceTimeField& u, double l, const DyadicDecomposition& decomp,
                          const SymbolParams& params);

/// Besov-type Bourgain norm
///   ( sum_N [ sum_L <L + N^2>^{bq} <N>^{s1 q} ||P_N Q_L u||^q ]^{2/q} )^{1/2},
/// with an extra <eta>^{s2} weight inside the L^2 norms. Content outside the
/// decomposition's range is not counted (see uncovered_fraction).
double bourgain_norm(const SpaceTimeField& u, const NormSpec& spec, const DyadicDecomposition& decomp,
                     const SymbolParams& params);

/// Integral form ( int <i(tau - P) + xi^2>^{2b} <xi>^{2 s1} <eta>^{2 s2} |u^|^2 )^{1/2}.
double weighted_integral_norm(const SpaceTimeField& u, const NormSpec& spec, const SymbolParams& params);

/// Fraction of the L^2 energy on which the xi or sigma partition sums to less than 1.
double uncovered_fraction(const SpaceTimeField& u, const DyadicDecomposition& decomp, const SymbolParams& params);

/// Decomposition covering every node of u (grid band and full tau band).
DyadicDecomposition covering_decomposition(const SpaceTimeField& u, const SymbolParams& params);

}  // namespace kpb::analysis
