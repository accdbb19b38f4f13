#include "kpb/analysis/spacetime.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "kpb/analysis/dyadic.hpp"
#include "kpb/common/error.hpp"
#include "kpb/spectral/fft.hpp"
#include "kpb/spectral/operators.hpp"

namespace kpb::analysis {

double time_window(double t, double window_length) {
    const double x = t / window_length;
    if (x <= 0.0 || x >= 1.0) return 0.0;
    if (x < 0.25) return smooth_step(4.0 * x);
    if (x > 0.75) return smooth_step(4.0 * (1.0 - x));
    return 1.0;
}

namespace {

void check_shape(double window_length, std::size_t nt) {
    if (!(window_length > 0.0) || !std::isfinite(window_length)) {
        throw DomainError("SpaceTimeField: window length must be > 0");
    }
    if (nt < 16 || (nt & (nt - 1)) != 0) throw DomainError("SpaceTimeField: nt must be a power of two >= 16");
}

}  // namespace

SpaceTimeField::SpaceTimeField(const Grid2D& grid, double window_length, std::size_t nt)
    : grid_(grid), window_length_(window_length), nt_(nt), coeffs_(grid.size() * nt) {
    check_shape(window_length, nt);
}

SpaceTimeField::SpaceTimeField(const Grid2D& grid, double window_length, std::size_t nt, std::vector<cplx> coeffs)
    : grid_(grid), window_length_(window_length), nt_(nt), coeffs_(std::move(coeffs)) {
    check_shape(window_length, nt);
    if (coeffs_.size() != grid.size() * nt) throw DomainError("SpaceTimeField: coefficient count mismatch");
}

SpaceTimeField SpaceTimeField::from_samples(const std::vector<SpectralField2D>& samples, double window_length,
                                            Windowing windowing) {
    if (samples.empty()) throw DomainError("SpaceTimeField: no samples");
    const Grid2D& g = samples.front().grid();
    const std::size_t nt = samples.size();
    SpaceTimeField out(g, window_length, nt);
    const std::size_t n = g.size();
    const double scale = 1.0 / static_cast<double>(nt);
    for (std::size_t k = 0; k < nt; ++k) {
        if (!(samples[k].grid() == g)) throw GridMismatch("SpaceTimeField: samples on different grids");
        double w = scale;
        if (windowing == Windowing::Apply) w *= time_window(sample_time(window_length, nt, k), window_length);
        const auto c = samples[k].coeffs();
        for (std::size_t i = 0; i < n; ++i) out.coeffs_[k * n + i] = w * c[i];
    }
    spectral::fft::transform_strided(out.coeffs_, nt, n, spectral::fft::Direction::Forward);
    return out;
}

SpaceTimeField SpaceTimeField::from_function(const Grid2D& grid, double window_length, std::size_t nt,
                                             const std::function<SpectralField2D(double)>& u,
                                             Windowing windowing) {
    check_shape(window_length, nt);
    std::vector<SpectralField2D> samples;
    samples.reserve(nt);
    for (std::size_t k = 0; k < nt; ++k) {
        samples.push_back(u(sample_time(window_length, nt, k)));
        if (!(samples.back().grid() == grid)) throw GridMismatch("SpaceTimeField: sample on a different grid");
    }
    return from_samples(samples, window_length, windowing);
}

int SpaceTimeField::mode_t(std::size_t m) const {
    return 2 * m < nt_ ? static_cast<int>(m) : static_cast<int>(m) - static_cast<int>(nt_);
}

double SpaceTimeField::tau(std::size_t m) const {
    return 2.0 * std::numbers::pi * mode_t(m) / window_length_;
}

std::vector<SpectralField2D> SpaceTimeField::to_samples() const {
    std::vector<cplx> data = coeffs_;
    const std::size_t n = grid_.size();
    spectral::fft::transform_strided(data, nt_, n, spectral::fft::Direction::Backward);
    std::vector<SpectralField2D> out;
    out.reserve(nt_);
    for (std::size_t k = 0; k < nt_; ++k) {
        out.emplace_back(grid_, std::vector<cplx>(data.begin() + k * n, data.begin() + (k + 1) * n));
    }
    return out;
}

double SpaceTimeField::l2_norm() const {
    double s = 0.0;
    for (const cplx& c : coeffs_) s += std::norm(c);
    return std::sqrt(window_length_ * grid_.lx() * grid_.ly() * s);
}

SpaceTimeField& SpaceTimeField::operator*=(double a) {
    for (cplx& c : coeffs_) c *= a;
    return *this;
}

SpaceTimeField& SpaceTimeField::operator+=(const SpaceTimeField& o) {
    if (!(o.grid_ == grid_) || o.nt_ != nt_ || o.window_length_ != window_length_) {
        throw GridMismatch("SpaceTimeField: shapes differ");
    }
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    return *this;
}

SpaceTimeField x_derivative_of_product(const SpaceTimeField& u, const SpaceTimeField& v) {
    if (!(u.grid() == v.grid()) || u.nt() != v.nt() || u.window_length() != v.window_length()) {
        throw GridMismatch("x_derivative_of_product: shapes differ");
    }
    const auto us = u.to_samples();
    const auto vs = v.to_samples();
    std::vector<SpectralField2D> prod;
    prod.reserve(us.size());
    for (std::size_t k = 0; k < us.size(); ++k) {
        prod.push_back(spectral::x_derivative(spectral::dealiased_product(us[k], vs[k])));
    }
    return SpaceTimeField::from_samples(prod, u.window_length(), Windowing::Preapplied);
}

}  // namespace kpb::analysis
