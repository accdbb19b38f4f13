#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "kpb/analysis/norms.hpp"

namespace kpb::analysis {

struct RatioRow {
    std::size_t sample_id = 0;
    std::vector<double> params;
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
};

/// Result of an ensemble verification: one row per usable sample.
struct RatioReport {
    std::string name;
    std::vector<std::string> param_names;
    std::vector<RatioRow> rows;
    /// Skipped samples and other remarks, echoed as comment lines.
    std::vector<std::string> notes;

    double max_ratio() const;
    double median_ratio() const;
    /// Merges another report's rows (same columns) in order.
    void append(const RatioReport& other);
};

/// `sample_id, <params>, lhs, rhs, ratio` rows with 17 significant digits, then
/// `# note ...` lines and a `# summary ...` row.
void write_ratio_report(std::ostream& out, const RatioReport& report);

/// Random data with a prescribed spectral profile: modes 1 <= |j| <= max_mode_x,
/// |k| <= max_mode_y, coefficient = complex normal * <(xi, eta)>^{-decay}.
/// Draws are keyed by (seed, stream, sample, j, k), so a member does not depend
/// on the grid it is placed on as long as the modes fit.
struct EnsembleSpec {
    Grid2D grid{16, 16};
    int max_mode_x = 3;
    int max_mode_y = 2;
    double decay = 1.0;
    double amplitude = 1.0;
    std::uint64_t seed = 1;
    std::size_t samples = 100;
};

SpectralField2D ensemble_member(const EnsembleSpec& spec, std::size_t sample, std::uint64_t stream = 0);

struct FreeTermConfig {
    double s = 0.0;
    double window_length = 8.0;
    std::size_t nt = 256;
    unsigned jobs = 1;
};

/// psi(t - T_w/2) W(t - T_w/2) phi sampled on [0, T_w), psi = eta.
SpaceTimeField localized_free_wave(const SpectralField2D& phi, double window_length, std::size_t nt,
                                   double half_width, const SymbolParams& params);

/// R(phi) = ||psi W phi||_{X^{1/2, s, 0, 1}} / ||phi||_{H^{s,0}} over the ensemble.
/// Without an explicit decomposition each sample uses the covering one.
RatioReport verify_free_term_estimate(const EnsembleSpec& ensemble, const FreeTermConfig& cfg,
                                      const SymbolParams& params,
                                      const std::optional<DyadicDecomposition>& decomp = std::nullopt);

struct BilinearConfig {
    double s = 0.0;
    /// Time support half-width: u, v vanish outside |t - T_w/2| < T.
    double T = 1.0;
    double window_length = 8.0;
    std::size_t nt = 512;
    unsigned jobs = 1;
};

/// ||d/dx(u v)||_{X^{-1/2, s, 0, 1}} / (||u||_{X^{1/2, s, 0, 1}} ||v||_{X^{1/2, s, 0, 1}}) with
/// u = eta(2(t - t_c)/T) W(t - t_c) phi_1, v likewise from phi_2 (stream 1 of the ensemble).
RatioReport verify_bilinear_estimate(const EnsembleSpec& ensemble, const BilinearConfig& cfg,
                                     const SymbolParams& params,
                                     const std::optional<DyadicDecomposition>& decomp = std::nullopt);

struct TimeScan {
    std::vector<double> T;
    std::vector<double> max_ratio;
    /// Least-squares slope of log(max ratio) against log T.
    double exponent = 0.0;
};

TimeScan bilinear_time_scan(const EnsembleSpec& ensemble, BilinearConfig cfg, const std::vector<double>& Ts,
                            const SymbolParams& params);

/// Measure of {(a, b) : |a| <= a1, |b| <= a2, |a + b + omega| <= a3}. This is the
/// tau-integral of a product of three modulation indicators, in closed form.
double modulation_overlap(double omega, double a1, double a2, double a3);

/// Non-negative profile g(xi, mu) on {|xi| in [2^{k-1}, 2^k], |mu| <= mu_extent}:
/// bilinear interpolation of lattice values, one lattice per sign of xi.
struct BandProfile {
    int k = 0;
    double mu_extent = 4.0;
    std::size_t cells = 4;
    std::vector<double> values;  // [sign][ix][imu], (cells + 1)^2 per sign

    static BandProfile indicator(int k, double mu_extent, std::size_t cells);
    static BandProfile random(int k, double mu_extent, std::size_t cells, std::uint64_t seed,
                              std::uint64_t sample, std::uint64_t index);

    double xi_lo() const;
    double xi_hi() const;
    /// 0 outside the band.
    double operator()(double xi, double mu) const;
    /// int g^2 dxi dmu (exact for the bilinear pieces).
    double square_integral() const;
    BandProfile& operator*=(double a);
};

struct DyadicConvolutionConfig {
    std::size_t trials = 100;
    int k_min = 0, k_max = 2;
    int j_min = 0, j_max = 2;
    double mu_extent = 4.0;
    std::size_t profile_cells = 3;
    /// Quadrature panels per profile cell (2-point Gauss each).
    std::size_t refinement = 2;
    /// Common factor on all three profiles (the ratio is invariant under it).
    double amplitude = 1.0;
    std::uint64_t seed = 1;
    unsigned jobs = 1;
};

/// int (f1 * f2) f3 for f_i = g_i(xi, mu) 1{|tau - P(xi, mu)| <= 2^{j_i}}; the tau
/// integrals are done exactly (modulation_overlap), the rest by composite Gauss.
/// `support` receives the measure of the (xi, mu, xi1, mu1) integration domain.
double trilinear_dyadic_integral(const BandProfile& g1, const BandProfile& g2, const BandProfile& g3,
                                 const int (&j)[3], std::size_t refinement, const SymbolParams& params,
                                 double* support = nullptr);

/// Ratio of the trilinear integral to 2^{(j1+j2+j3)/2} 2^{-(k1+k2+k3)/2} ||f1|| ||f2|| ||f3||
/// over random (k, j) draws, plus indicator data at k = (1,1,1) and (1,1,2), j = (0,0,0).
RatioReport verify_dyadic_convolution(const DyadicConvolutionConfig& cfg, const SymbolParams& params);

}  // namespace kpb::analysis
