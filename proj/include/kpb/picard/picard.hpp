#pragma once

#include <cstddef>
#include <ostream>
#include <string>
#include <vector>

#include "kpb/spectral/field.hpp"
#include "kpb/spectral/symbol.hpp"

namespace kpb::picard {

using spectral::Grid2D;
using spectral::SpectralField2D;
using spectral::SymbolParams;

struct PicardConfig {
    double horizon = 0.25;
    /// Chebyshev-Lobatto nodes on [0, T] at which iterates are stored.
    std::size_t storage_nodes = 32;
    /// Composite Gauss-Legendre rule for each inner integral: panels x points.
    std::size_t quadrature_panels = 4;
    std::size_t gauss_points = 8;
    std::size_t max_iterations = 40;
    /// Stop when d_k <= tolerance * sup_t ||u_k||.
    double tolerance = 1e-12;
    /// Index s of the sup-in-time H^{s,0} metric.
    double norm_s = 0.0;
    unsigned jobs = 1;

    /// Throws std::invalid_argument on inadmissible values.
    void validate() const;
};

/// An iterate sampled at the storage nodes.
struct NodalTrajectory {
    std::vector<double> times;
    std::vector<SpectralField2D> fields;
};

/// t -> W(t) phi at the storage nodes implied by cfg.
NodalTrajectory free_trajectory(const SpectralField2D& phi, const PicardConfig& cfg, const SymbolParams& params);

/// t -> W(t) phi - 1/2 int_0^t W(t - t') d/dx (u^2)(t') dt' at the nodes of u.
///
/// The integrand's nonlinear factor is interpolated from the storage nodes
/// (barycentric, Chebyshev-Lobatto) to the Gauss-Legendre points of each
/// integral; the W(t - t') factor is applied exactly. Throws BlowUpError on
/// non-finite output (the error's step is the storage node index).
NodalTrajectory duhamel_map(const NodalTrajectory& u, const SpectralField2D& phi, const PicardConfig& cfg,
                            const SymbolParams& params);

double sup_norm(const NodalTrajectory& u, double s);
double sup_distance(const NodalTrajectory& u, const NodalTrajectory& v, double s);

enum class PicardStatus { Converged, Diverged, MaxIterations };

std::string to_string(PicardStatus status);

/// u^(0) = 0, u^(k+1) = duhamel_map(u^(k)). Entry k of the vectors refers to u^(k):
/// d[k] = sup_t ||u^(k) - u^(k-1)||_{H^{s,0}} (d[0] = 0), ratio[k] = d[k] / d[k-1]
/// (0 where undefined). Divergence is data, never an exception.
struct IterateSequence {
    std::vector<NodalTrajectory> iterates;  // all iterates when kept, else the last two
    std::vector<double> sup_norms;
    std::vector<double> differences;
    std::vector<double> ratios;
    PicardStatus status = PicardStatus::MaxIterations;
    std::string note;

    std::size_t iterations() const { return sup_norms.empty() ? 0 : sup_norms.size() - 1; }
    const NodalTrajectory& last() const { return iterates.back(); }
};

IterateSequence iterate_to_fixed_point(const SpectralField2D& phi, const PicardConfig& cfg,
                                       const SymbolParams& params, bool keep_iterates = false);

struct HorizonTrial {
    double horizon;
    PicardStatus status;
    std::size_t iterations;
};

/// Runs iterate_to_fixed_point at cfg.horizon, then halves the horizon until
/// the iteration converges or `max_halvings` is exhausted. One entry per horizon tried.
std::vector<HorizonTrial> contraction_horizon_scan(const SpectralField2D& phi, PicardConfig cfg,
                                                   const SymbolParams& params, std::size_t max_halvings = 6);

/// Column text `k, d_k, ratio, sup_hs_norm` with 17 significant digits.
void write_iterate_report(std::ostream& out, const IterateSequence& seq);

/// Smooth test datum: a centred periodized Gaussian of the given physical width,
/// with its x-mean removed and then rescaled so that max |u| equals `peak`.
SpectralField2D gaussian_bump(const Grid2D& grid, double peak, double width = 1.0);

/// Second-order term of the data-to-solution expansion,
///   u_2(t) = - int_0^t W(t - t') d/dx (W(t') phi)^2 dt',
/// i.e. the second derivative of the solution map at 0 in direction phi. The
/// integral uses the same composite Gauss-Legendre rule as duhamel_map.
SpectralField2D second_iterate_grid(const SpectralField2D& phi, double t, const SymbolParams& params,
                                    std::size_t panels = 4, std::size_t gauss_points = 8);

}  // namespace kpb::picard
