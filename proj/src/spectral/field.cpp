#include "kpb/spectral/field.hpp"

#include <cmath>
#include <stdexcept>

#include "kpb/common/error.hpp"
#include "kpb/common/numeric.hpp"
#include "kpb/spectral/fft.hpp"

namespace kpb::spectral {

SpectralField2D::SpectralField2D(Grid2D grid) : grid_(grid), coeffs_(grid.size(), cplx{}) {}

SpectralField2D::SpectralField2D(Grid2D grid, std::vector<cplx> coeffs)
    : grid_(grid), coeffs_(std::move(coeffs)) {
    if (coeffs_.size() != grid_.size()) {
        throw std::invalid_argument("SpectralField2D: coefficient count does not match grid");
    }
    enforce_constraints();
}

SpectralField2D SpectralField2D::from_physical(const Grid2D& grid, std::span<const double> values) {
    if (values.size() != grid.size()) {
        throw std::invalid_argument("SpectralField2D::from_physical: sample count does not match grid");
    }
    std::vector<cplx> data(values.begin(), values.end());
    fft::transform_2d(data, grid.nx(), grid.ny(), fft::Direction::Forward);
    const double scale = 1.0 / static_cast<double>(grid.size());
    for (auto& c : data) c *= scale;
    return SpectralField2D(grid, std::move(data));
}

std::vector<double> SpectralField2D::to_physical() const {
    std::vector<cplx> data(coeffs_);
    fft::transform_2d(data, grid_.nx(), grid_.ny(), fft::Direction::Backward);
    std::vector<double> out(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) out[i] = data[i].real();
    return out;
}

void SpectralField2D::set_mode(int j, int k, cplx value) {
    const std::size_t i = grid_.index(j, k);
    const std::size_t c = grid_.conjugate_index(i);
    coeffs_[i] = value;
    coeffs_[c] = std::conj(value);
    enforce_constraints();
}

void SpectralField2D::enforce_constraints() {
    const std::size_t nx = grid_.nx(), ny = grid_.ny();
    for (std::size_t ix = 0; ix < nx; ++ix) {
        const bool drop_row = ix == 0 || grid_.is_nyquist_x(ix);
        for (std::size_t iy = 0; iy < ny; ++iy) {
            const std::size_t i = ix * ny + iy;
            if (drop_row || grid_.is_nyquist_y(iy)) {
                coeffs_[i] = cplx{};
                continue;
            }
            const std::size_t c = grid_.conjugate_index(i);
            if (c > i) {
                const cplx avg = 0.5 * (coeffs_[i] + std::conj(coeffs_[c]));
                coeffs_[i] = avg;
                coeffs_[c] = std::conj(avg);
            }
        }
    }
}

double SpectralField2D::weighted_energy_impl(std::span<const double> weighted_sq) const {
    return grid_.lx() * grid_.ly() * pairwise_sum(weighted_sq);
}

void SpectralField2D::check_same_grid(const SpectralField2D& other) const {
    if (!(grid_ == other.grid_)) throw GridMismatch("SpectralField2D: operands live on different grids");
}

SpectralField2D& SpectralField2D::operator+=(const SpectralField2D& other) {
    check_same_grid(other);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
    return *this;
}

SpectralField2D& SpectralField2D::operator-=(const SpectralField2D& other) {
    check_same_grid(other);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
    return *this;
}

SpectralField2D& SpectralField2D::operator*=(double scale) {
    for (auto& c : coeffs_) c *= scale;
    return *this;
}

SpectralField2D& SpectralField2D::axpy(double scale, const SpectralField2D& other) {
    check_same_grid(other);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += scale * other.coeffs_[i];
    return *this;
}

bool SpectralField2D::all_finite() const {
    for (const auto& c : coeffs_) {
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
    }
    return true;
}

bool SpectralField2D::is_zero() const {
    for (const auto& c : coeffs_) {
        if (c != cplx{}) return false;
    }
    return true;
}

SpectralField2D operator+(SpectralField2D a, const SpectralField2D& b) { return a += b; }
SpectralField2D operator-(SpectralField2D a, const SpectralField2D& b) { return a -= b; }
SpectralField2D operator*(double s, SpectralField2D a) { return a *= s; }

double l2_distance(const SpectralField2D& a, const SpectralField2D& b) {
    return std::sqrt((a - b).weighted_energy([](double, double) { return 1.0; }));
}

}  // namespace kpb::spectral
