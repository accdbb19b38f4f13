#include "kpb/analysis/norms.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "kpb/common/error.hpp"
#include "kpb/common/numeric.hpp"

namespace kpb::analysis {

namespace {

double symbol_or_zero(double xi, double eta, const SymbolParams& params) {
    return xi == 0.0 ? 0.0 : spectral::evaluate_symbol(xi, eta, params);
}

// P(xi, eta) at every grid storage index.
std::vector<double> symbol_table(const Grid2D& g, const SymbolParams& params) {
    std::vector<double> p(g.size());
    for (std::size_t ix = 0; ix < g.nx(); ++ix)
        for (std::size_t iy = 0; iy < g.ny(); ++iy) p[ix * g.ny() + iy] = symbol_or_zero(g.xi(ix), g.eta(iy), params);
    return p;
}

std::vector<double> xi_table(const Grid2D& g) {
    std::vector<double> x(g.size());
    for (std::size_t ix = 0; ix < g.nx(); ++ix)
        for (std::size_t iy = 0; iy < g.ny(); ++iy) x[ix * g.ny() + iy] = g.xi(ix);
    return x;
}

}  // namespace

void NormSpec::validate() const {
    if (q != 1.0 && q != 2.0) throw DomainError("NormSpec: q must be 1 or 2");
    if (!std::isfinite(b) || !std::isfinite(s1) || !std::isfinite(s2)) throw DomainError("NormSpec: non-finite index");
}

SpectralField2D project_PN(const SpectralField2D& u, double n, const DyadicDecomposition& decomp) {
    const int level = decomp.n_index(n);
    const Grid2D& g = u.grid();
    std::vector<cplx> c(u.coeffs().begin(), u.coeffs().end());
    for (std::size_t ix = 0; ix < g.nx(); ++ix) {
        const double w = DyadicDecomposition::block_weight(level, g.xi(ix));
        for (std::size_t iy = 0; iy < g.ny(); ++iy) c[ix * g.ny() + iy] *= w;
    }
    return SpectralField2D(g, std::move(c));
}

SpaceTimeField project_PN(const SpaceTimeField& u, double n, const DyadicDecomposition& decomp) {
    const int level = decomp.n_index(n);
    const std::vector<double> xi = xi_table(u.grid());
    std::vector<double> w(xi.size());
    for (std::size_t i = 0; i < xi.size(); ++i) w[i] = DyadicDecomposition::block_weight(level, xi[i]);
    SpaceTimeField out = u;
    for (std::size_t m = 0; m < u.nt(); ++m)
        for (std::size_t i = 0; i < w.size(); ++i) out.at(m, i) *= w[i];
    return out;
}

SpaceTimeField project_QL(const SpaceTimeField& u, double l, const DyadicDecomposition& decomp,
                          const SymbolParams& params) {
    const int level = decomp.l_index(l);
    const std::vector<double> p = symbol_table(u.grid(), params);
    SpaceTimeField out = u;
    for (std::size_t m = 0; m < u.nt(); ++m) {
        const double tau = u.tau(m);
        for (std::size_t i = 0; i < p.size(); ++i) out.at(m, i) *= DyadicDecomposition::block_weight(level, tau - p[i]);
    }
    return out;
}

double bourgain_norm(const SpaceTimeField& u, const NormSpec& spec, const DyadicDecomposition& decomp,
                     const SymbolParams& params) {
    spec.validate();
    const Grid2D& g = u.grid();
    const std::vector<double> p = symbol_table(g, params);
    const std::vector<double> xi = xi_table(g);
    const int nj = decomp.j_max() + 1, nl = decomp.l_max() + 1;
    std::vector<double> eta_w(g.size(), 1.0);
    if (spec.s2 != 0.0) {
        for (std::size_t ix = 0; ix < g.nx(); ++ix)
            for (std::size_t iy = 0; iy < g.ny(); ++iy)
                eta_w[ix * g.ny() + iy] = std::pow(1.0 + g.eta(iy) * g.eta(iy), spec.s2);
    }

    // energy[j][l] = ||P_N Q_L u||^2 / (T lx ly)
    std::vector<double> energy(static_cast<std::size_t>(nj * nl), 0.0);
    std::array<LevelWeight, 2> wn{}, wl{};
    for (std::size_t m = 0; m < u.nt(); ++m) {
        const double tau = u.tau(m);
        for (std::size_t i = 0; i < g.size(); ++i) {
            const double a = std::norm(u.at(m, i));
            if (a == 0.0) continue;
            const std::size_t cn = DyadicDecomposition::nonzero_blocks(xi[i], decomp.j_max(), wn);
            const std::size_t cl = DyadicDecomposition::nonzero_blocks(tau - p[i], decomp.l_max(), wl);
            for (std::size_t x = 0; x < cn; ++x)
                for (std::size_t y = 0; y < cl; ++y) {
                    const double w = wn[x].weight * wl[y].weight;
                    energy[static_cast<std::size_t>(wn[x].level * nl + wl[y].level)] += w * w * a * eta_w[i];
                }
        }
    }

    const double measure = u.window_length() * g.lx() * g.ly();
    double total = 0.0;
    for (int j = 0; j < nj; ++j) {
        const double n = std::ldexp(1.0, j);
        double inner = 0.0;
        for (int l = 0; l < nl; ++l) {
            const double e = energy[static_cast<std::size_t>(j * nl + l)];
            if (e == 0.0) continue;
            const double blk = std::sqrt(measure * e);
            const double weight = std::pow(bracket(std::ldexp(1.0, l) + n * n), spec.b) * std::pow(bracket(n), spec.s1);
            inner += std::pow(weight * blk, spec.q);
        }
        total += std::pow(inner, 2.0 / spec.q);
    }
    return std::sqrt(total);
}

double weighted_integral_norm(const SpaceTimeField& u, const NormSpec& spec, const SymbolParams& params) {
    spec.validate();
    const Grid2D& g = u.grid();
    const std::vector<double> p = symbol_table(g, params);
    std::vector<double> terms;
    terms.reserve(u.coeffs().size());
    for (std::size_t m = 0; m < u.nt(); ++m) {
        const double tau = u.tau(m);
        for (std::size_t ix = 0; ix < g.nx(); ++ix) {
            const double xi = g.xi(ix);
            for (std::size_t iy = 0; iy < g.ny(); ++iy) {
                const std::size_t i = ix * g.ny() + iy;
                const double a = std::norm(u.at(m, i));
                if (a == 0.0) continue;
                const double sigma = tau - p[i];
                const double eta = g.eta(iy);
                terms.push_back(std::pow(1.0 + sigma * sigma + xi * xi * xi * xi, spec.b) *
                                std::pow(1.0 + xi * xi, spec.s1) * std::pow(1.0 + eta * eta, spec.s2) * a);
            }
        }
    }
    return std::sqrt(u.window_length() * g.lx() * g.ly() * pairwise_sum(terms));
}

double uncovered_fraction(const SpaceTimeField& u, const DyadicDecomposition& decomp, const SymbolParams& params) {
    const Grid2D& g = u.grid();
    const std::vector<double> p = symbol_table(g, params);
    const std::vector<double> xi = xi_table(g);
    const double xi_cap = std::ldexp(1.0, decomp.j_max());
    const double sigma_cap = std::ldexp(1.0, decomp.l_max());
    double lost = 0.0, all = 0.0;
    for (std::size_t m = 0; m < u.nt(); ++m) {
        const double tau = u.tau(m);
        for (std::size_t i = 0; i < g.size(); ++i) {
            const double a = std::norm(u.at(m, i));
            all += a;
            if (std::abs(xi[i]) > xi_cap || std::abs(tau - p[i]) > sigma_cap) lost += a;
        }
    }
    return all > 0.0 ? lost / all : 0.0;
}

DyadicDecomposition covering_decomposition(const SpaceTimeField& u, const SymbolParams& params) {
    const Grid2D& g = u.grid();
    const std::vector<double> p = symbol_table(g, params);
    double xi_max = 0.0, p_max = 0.0;
    for (std::size_t ix = 0; ix < g.nx(); ++ix) xi_max = std::max(xi_max, std::abs(g.xi(ix)));
    for (double v : p) p_max = std::max(p_max, std::abs(v));
    const double tau_max = std::numbers::pi * static_cast<double>(u.nt()) / u.window_length();
    return DyadicDecomposition::covering(xi_max, tau_max + p_max);
}

}  // namespace kpb::analysis
