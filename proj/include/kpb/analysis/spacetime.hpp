#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "kpb/spectral/field.hpp"

namespace kpb::analysis {

using spectral::cplx;
using spectral::Grid2D;
using spectral::SpectralField2D;

/// Smooth time window on [0, T]: 1 on [T/4, 3T/4], C-infinity ramps to 0 at the ends.
double time_window(double t, double window_length);

enum class Windowing {
    /// Multiply the samples by time_window before transforming.
    Apply,
    /// The samples are already localized in time (e.g. a cutoff psi(t) was applied).
    Preapplied,
};

/// A function of (t, x, y) on [0, T_w) x torus, stored by its space-time Fourier
/// coefficients:
///
///   u(t, x, y) = sum_m sum_nu c[m][nu] e^{i (tau_m t + xi x + eta y)},  tau_m = 2 pi m / T_w,
///
/// from nt equispaced samples t_n = n T_w / nt. The time DFT carries the 1/nt factor,
/// so ||u||^2_{L^2_{t,x,y}} = T_w * lx * ly * sum |c|^2. Storage is [m][i] with m in
/// FFT order and i the grid's storage index.
class SpaceTimeField {
public:
    SpaceTimeField(const Grid2D& grid, double window_length, std::size_t nt);
    SpaceTimeField(const Grid2D& grid, double window_length, std::size_t nt, std::vector<cplx> coeffs);

    static double sample_time(double window_length, std::size_t nt, std::size_t n) {
        return window_length * static_cast<double>(n) / static_cast<double>(nt);
    }

    /// From samples u(t_n), n = 0..nt-1; all on the same grid.
    static SpaceTimeField from_samples(const std::vector<SpectralField2D>& samples, double window_length,
                                       Windowing windowing);
    static SpaceTimeField from_function(const Grid2D& grid, double window_length, std::size_t nt,
                                        const std::function<SpectralField2D(double)>& u, Windowing windowing);

    const Grid2D& grid() const { return grid_; }
    double window_length() const { return window_length_; }
    std::size_t nt() const { return nt_; }
    int mode_t(std::size_t m) const;
    double tau(std::size_t m) const;

    std::span<const cplx> coeffs() const { return coeffs_; }
    std::span<cplx> coeffs() { return coeffs_; }
    cplx& at(std::size_t m, std::size_t i) { return coeffs_[m * grid_.size() + i]; }
    const cplx& at(std::size_t m, std::size_t i) const { return coeffs_[m * grid_.size() + i]; }

    /// Samples u(t_n) (the windowed function, if the window was applied).
    std::vector<SpectralField2D> to_samples() const;

    /// L^2 norm over [0, T_w) x torus.
    double l2_norm() const;

    SpaceTimeField& operator*=(double a);
    SpaceTimeField& operator+=(const SpaceTimeField& o);

private:
    Grid2D grid_;
    double window_length_;
    std::size_t nt_;
    std::vector<cplx> coeffs_;
};

/// Pointwise-in-time d/dx (u v), dealiased in space. Both fields must share grid and window.
SpaceTimeField x_derivative_of_product(const SpaceTimeField& u, const SpaceTimeField& v);

}  // namespace kpb::analysis
