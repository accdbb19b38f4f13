#pragma once

#include <cstddef>
#include <numbers>

namespace kpb::spectral {

/// Doubly periodic box [0, lx) x [0, ly) resolved by nx x ny Fourier modes.
///
/// Coefficients are stored x-major (index = ix * ny + iy) in FFT order: storage
/// index ix maps to the signed mode j = ix for ix < nx/2 and j = ix - nx otherwise,
/// so j ranges over [-nx/2, nx/2). The wavenumber of mode j is xi_j = 2 pi j / lx
/// (and eta_k = 2 pi k / ly in y).
class Grid2D {
public:
    Grid2D(std::size_t nx, std::size_t ny, double lx = 2.0 * std::numbers::pi,
           double ly = 2.0 * std::numbers::pi);

    std::size_t nx() const { return nx_; }
    std::size_t ny() const { return ny_; }
    double lx() const { return lx_; }
    double ly() const { return ly_; }
    std::size_t size() const { return nx_ * ny_; }

    int mode_x(std::size_t ix) const { return signed_mode(ix, nx_); }
    int mode_y(std::size_t iy) const { return signed_mode(iy, ny_); }
    double xi(std::size_t ix) const { return dxi() * mode_x(ix); }
    double eta(std::size_t iy) const { return deta() * mode_y(iy); }
    double dxi() const { return 2.0 * std::numbers::pi / lx_; }
    double deta() const { return 2.0 * std::numbers::pi / ly_; }

    /// Storage index of signed mode (j, k); both must lie in [-n/2, n/2).
    std::size_t index(int j, int k) const;
    /// Storage index of the mode (-j, -k) paired with storage index `i`.
    std::size_t conjugate_index(std::size_t i) const;

    bool is_nyquist_x(std::size_t ix) const { return 2 * ix == nx_; }
    bool is_nyquist_y(std::size_t iy) const { return 2 * iy == ny_; }

    /// Largest |j| (resp. |k|) retained by the two-thirds rule: 3K < n.
    int dealias_cutoff_x() const { return static_cast<int>((nx_ - 1) / 3); }
    int dealias_cutoff_y() const { return static_cast<int>((ny_ - 1) / 3); }
    bool in_dealiased_band(std::size_t ix, std::size_t iy) const;

    friend bool operator==(const Grid2D&, const Grid2D&) = default;

private:
    static int signed_mode(std::size_t i, std::size_t n) {
        return 2 * i < n ? static_cast<int>(i) : static_cast<int>(i) - static_cast<int>(n);
    }

    std::size_t nx_;
    std::size_t ny_;
    double lx_;
    double ly_;
};

}  // namespace kpb::spectral
