#pragma once

#include <complex>
#include <span>
#include <vector>

#include "kpb/spectral/grid.hpp"

namespace kpb::spectral {

using cplx = std::complex<double>;

/// Fourier coefficients of a real, x-mean-free field on a periodic grid.
///
/// Normalization: u(x, y) = sum_{j,k} c_{jk} e^{i(xi_j x + eta_k y)}, i.e. the
/// forward transform carries 1/(nx ny). Hence
///   integral |u|^2 dx dy = lx ly sum |c|^2.
///
/// Every constructor and mutator re-imposes the three structural constraints:
///   - Hermitian symmetry c(-j,-k) = conj c(j,k),
///   - zero x-mass: c(0, k) = 0 for all k,
///   - zero Nyquist row/column (j = -nx/2 or k = -ny/2).
class SpectralField2D {
public:
    explicit SpectralField2D(Grid2D grid);
    SpectralField2D(Grid2D grid, std::vector<cplx> coeffs);

    /// Forward transform of physical samples u[ix * ny + iy] at x = ix lx/nx, y = iy ly/ny.
    static SpectralField2D from_physical(const Grid2D& grid, std::span<const double> values);
    std::vector<double> to_physical() const;

    const Grid2D& grid() const { return grid_; }
    std::span<const cplx> coeffs() const { return coeffs_; }
    cplx operator[](std::size_t i) const { return coeffs_[i]; }
    cplx at(int j, int k) const { return coeffs_[grid_.index(j, k)]; }

    /// Sets mode (j, k) and its conjugate partner. Writes to constrained modes are dropped.
    void set_mode(int j, int k, cplx value);

    /// Squared weighted norm lx ly sum w(xi, eta) |c|^2 with pairwise summation.
    template <class Weight>
    double weighted_energy(Weight&& w) const;

    SpectralField2D& operator+=(const SpectralField2D& other);
    SpectralField2D& operator-=(const SpectralField2D& other);
    SpectralField2D& operator*=(double scale);
    /// this += scale * other
    SpectralField2D& axpy(double scale, const SpectralField2D& other);

    bool all_finite() const;
    bool is_zero() const;

    /// Re-imposes the structural constraints (see class comment).
    void enforce_constraints();

private:
    void check_same_grid(const SpectralField2D& other) const;
    double weighted_energy_impl(std::span<const double> weighted_sq) const;

    Grid2D grid_;
    std::vector<cplx> coeffs_;
};

SpectralField2D operator+(SpectralField2D a, const SpectralField2D& b);
SpectralField2D operator-(SpectralField2D a, const SpectralField2D& b);
SpectralField2D operator*(double s, SpectralField2D a);

/// Plain L2 distance, lx ly sum |a - b|^2 under the square root.
double l2_distance(const SpectralField2D& a, const SpectralField2D& b);

template <class Weight>
double SpectralField2D::weighted_energy(Weight&& w) const {
    std::vector<double> terms(coeffs_.size());
    for (std::size_t ix = 0; ix < grid_.nx(); ++ix) {
        const double xi = grid_.xi(ix);
        for (std::size_t iy = 0; iy < grid_.ny(); ++iy) {
            const std::size_t i = ix * grid_.ny() + iy;
            terms[i] = w(xi, grid_.eta(iy)) * std::norm(coeffs_[i]);
        }
    }
    return weighted_energy_impl(terms);
}

}  // namespace kpb::spectral
