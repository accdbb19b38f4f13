#include "kpb/spectral/grid.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace kpb::spectral {

Grid2D::Grid2D(std::size_t nx, std::size_t ny, double lx, double ly)
    : nx_(nx), ny_(ny), lx_(lx), ly_(ly) {
    if (nx < 4 || ny < 4 || nx % 2 != 0 || ny % 2 != 0) {
        throw std::invalid_argument("Grid2D: mode counts must be even and >= 4 (got " +
                                    std::to_string(nx) + "x" + std::to_string(ny) + ")");
    }
    if (!(lx > 0.0) || !(ly > 0.0) || !std::isfinite(lx) || !std::isfinite(ly)) {
        throw std::invalid_argument("Grid2D: period lengths must be positive and finite");
    }
}

std::size_t Grid2D::index(int j, int k) const {
    const int hx = static_cast<int>(nx_ / 2);
    const int hy = static_cast<int>(ny_ / 2);
    if (j < -hx || j >= hx || k < -hy || k >= hy) {
        throw std::out_of_range("Grid2D::index: mode (" + std::to_string(j) + ", " +
                                std::to_string(k) + ") outside grid");
    }
    const std::size_t ix = j >= 0 ? static_cast<std::size_t>(j) : static_cast<std::size_t>(j + 2 * hx);
    const std::size_t iy = k >= 0 ? static_cast<std::size_t>(k) : static_cast<std::size_t>(k + 2 * hy);
    return ix * ny_ + iy;
}

std::size_t Grid2D::conjugate_index(std::size_t i) const {
    const std::size_t ix = i / ny_;
    const std::size_t iy = i % ny_;
    return ((nx_ - ix) % nx_) * ny_ + (ny_ - iy) % ny_;
}

bool Grid2D::in_dealiased_band(std::size_t ix, std::size_t iy) const {
    return std::abs(mode_x(ix)) <= dealias_cutoff_x() && std::abs(mode_y(iy)) <= dealias_cutoff_y();
}

}  // namespace kpb::spectral
