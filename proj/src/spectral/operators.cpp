#include "kpb/spectral/operators.hpp"

#include <cmath>

#include "kpb/common/error.hpp"
#include "kpb/common/numeric.hpp"
#include "kpb/spectral/fft.hpp"

namespace kpb::spectral {

namespace {

std::vector<cplx> truncated_physical(const SpectralField2D& u) {
    const Grid2D& g = u.grid();
    std::vector<cplx> data(g.size());
    for (std::size_t ix = 0; ix < g.nx(); ++ix) {
        for (std::size_t iy = 0; iy < g.ny(); ++iy) {
            const std::size_t i = ix * g.ny() + iy;
            data[i] = g.in_dealiased_band(ix, iy) ? u[i] : cplx{};
        }
    }
    fft::transform_2d(data, g.nx(), g.ny(), fft::Direction::Backward);
    return data;
}

}  // namespace

SpectralField2D dealias_truncate(const SpectralField2D& u) {
    const Grid2D& g = u.grid();
    std::vector<cplx> out(u.coeffs().begin(), u.coeffs().end());
    for (std::size_t ix = 0; ix < g.nx(); ++ix) {
        for (std::size_t iy = 0; iy < g.ny(); ++iy) {
            if (!g.in_dealiased_band(ix, iy)) out[ix * g.ny() + iy] = cplx{};
        }
    }
    return SpectralField2D(g, std::move(out));
}

SpectralField2D dealiased_product(const SpectralField2D& u, const SpectralField2D& v) {
    if (!(u.grid() == v.grid())) throw GridMismatch("dealiased_product: operands live on different grids");
    const Grid2D& g = u.grid();
    if (u.is_zero() || v.is_zero()) return SpectralField2D(g);

    std::vector<cplx> pu = truncated_physical(u);
    if (&u == &v) {
        for (auto& x : pu) x = cplx{x.real() * x.real(), 0.0};
    } else {
        const std::vector<cplx> pv = truncated_physical(v);
        for (std::size_t i = 0; i < pu.size(); ++i) pu[i] = cplx{pu[i].real() * pv[i].real(), 0.0};
    }
    fft::transform_2d(pu, g.nx(), g.ny(), fft::Direction::Forward);
    const double scale = 1.0 / static_cast<double>(g.size());
    for (std::size_t ix = 0; ix < g.nx(); ++ix) {
        for (std::size_t iy = 0; iy < g.ny(); ++iy) {
            const std::size_t i = ix * g.ny() + iy;
            pu[i] = g.in_dealiased_band(ix, iy) ? pu[i] * scale : cplx{};
        }
    }
    return SpectralField2D(g, std::move(pu));
}

SpectralField2D x_derivative(const SpectralField2D& u) {
    const Grid2D& g = u.grid();
    std::vector<cplx> out(g.size());
    for (std::size_t ix = 0; ix < g.nx(); ++ix) {
        const cplx factor{0.0, g.xi(ix)};
        for (std::size_t iy = 0; iy < g.ny(); ++iy) {
            const std::size_t i = ix * g.ny() + iy;
            out[i] = factor * u[i];
        }
    }
    return SpectralField2D(g, std::move(out));
}

double sobolev_norm(const SpectralField2D& u, double s1, double s2) {
    return std::sqrt(u.weighted_energy([s1, s2](double xi, double eta) {
        return std::pow(1.0 + xi * xi, s1) * std::pow(1.0 + eta * eta, s2);
    }));
}

double l2_norm(const SpectralField2D& u) {
    return std::sqrt(u.weighted_energy([](double, double) { return 1.0; }));
}

}  // namespace kpb::spectral
