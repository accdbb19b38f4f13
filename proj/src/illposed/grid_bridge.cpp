#include "kpb/illposed/grid_bridge.hpp"

#include <cmath>

namespace kpb::illposed {

namespace {

Rect cell(const spectral::Grid2D& g, std::size_t ix, std::size_t iy) {
    const double x = g.xi(ix), y = g.eta(iy);
    return {x - 0.5 * g.dxi(), x + 0.5 * g.dxi(), y - 0.5 * g.deta(), y + 0.5 * g.deta()};
}

}  // namespace

spectral::SpectralField2D phi_on_grid(const CounterexampleSpec& spec, const spectral::Grid2D& grid) {
    const PhiHat phi(spec);
    const std::vector<Rect> pieces = phi.rects().all();
    spectral::SpectralField2D f(grid);
    for (std::size_t ix = 0; ix < grid.nx(); ++ix) {
        for (std::size_t iy = 0; iy < grid.ny(); ++iy) {
            const Rect c = cell(grid, ix, iy);
            double area = 0.0;
            for (const Rect& r : pieces) area += c.intersect(r).area();
            if (area > 0.0) f.set_mode(grid.mode_x(ix), grid.mode_y(iy), phi.amplitude() * area);
        }
    }
    return f;
}

double windowed_grid_norm(const spectral::SpectralField2D& u, double N, double s) {
    const spectral::Grid2D& g = u.grid();
    const Rect w = output_window(N);
    const double cell_area = g.dxi() * g.deta();
    double sum = 0.0;
    for (std::size_t ix = 0; ix < g.nx(); ++ix) {
        for (std::size_t iy = 0; iy < g.ny(); ++iy) {
            const double a = cell(g, ix, iy).intersect(w).area();
            if (a <= 0.0) continue;
            const double xi = g.xi(ix);
            sum += a * std::pow(1.0 + xi * xi, s) * std::norm(u[ix * g.ny() + iy] / cell_area);
        }
    }
    return std::sqrt(sum);
}

}  // namespace kpb::illposed
