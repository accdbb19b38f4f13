#include "kpb/picard/picard.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <stdexcept>

#include "kpb/common/error.hpp"
#include "kpb/common/numeric.hpp"
#include "kpb/common/parallel.hpp"
#include "kpb/evolution/semigroup.hpp"
#include "kpb/spectral/operators.hpp"

namespace kpb::picard {

using spectral::cplx;

namespace {

std::vector<cplx> rates(const Grid2D& g, const SymbolParams& params) {
    std::vector<cplx> l(g.size());
    for (std::size_t ix = 0; ix < g.nx(); ++ix)
        for (std::size_t iy = 0; iy < g.ny(); ++iy)
            l[ix * g.ny() + iy] = spectral::linear_rate(g.xi(ix), g.eta(iy), params);
    return l;
}

// d/dx (u^2), dealiased.
SpectralField2D quadratic(const SpectralField2D& u) {
    return spectral::x_derivative(spectral::dealiased_product(u, u));
}

}  // namespace

void PicardConfig::validate() const {
    if (!(horizon > 0.0) || !std::isfinite(horizon)) throw std::invalid_argument("picard: horizon must be > 0");
    if (storage_nodes < 2) throw std::invalid_argument("picard: storage_nodes must be >= 2");
    if (quadrature_panels == 0 || gauss_points == 0 || quadrature_panels * gauss_points < 8) {
        throw std::invalid_argument("picard: need at least 8 quadrature nodes per integral");
    }
    if (max_iterations == 0) throw std::invalid_argument("picard: max_iterations must be >= 1");
    if (!(tolerance >= 0.0)) throw std::invalid_argument("picard: tolerance must be >= 0");
    if (!std::isfinite(norm_s)) throw std::invalid_argument("picard: norm_s must be finite");
}

NodalTrajectory free_trajectory(const SpectralField2D& phi, const PicardConfig& cfg, const SymbolParams& params) {
    cfg.validate();
    NodalTrajectory out;
    out.times = chebyshev_lobatto(0.0, cfg.horizon, cfg.storage_nodes);
    out.fields.reserve(out.times.size());
    for (double t : out.times) out.fields.push_back(evolution::apply_evolution(phi, t, params));
    return out;
}

NodalTrajectory duhamel_map(const NodalTrajectory& u, const SpectralField2D& phi, const PicardConfig& cfg,
                            const SymbolParams& params) {
    cfg.validate();
    const std::size_t m = u.times.size();
    if (m != u.fields.size() || m < 2) throw std::invalid_argument("duhamel_map: malformed trajectory");
    const Grid2D& g = phi.grid();
    const std::size_t n = g.size();
    const std::vector<cplx> l = rates(g, params);

    std::vector<SpectralField2D> nl;
    nl.reserve(m);
    for (const auto& f : u.fields) {
        if (!(f.grid() == g)) throw GridMismatch("duhamel_map: trajectory and data grids differ");
        nl.push_back(quadratic(f));
    }

    NodalTrajectory out;
    out.times = u.times;
    out.fields.assign(m, SpectralField2D(g));
    const GaussRule unit = composite_gauss_legendre(0.0, 1.0, cfg.quadrature_panels, cfg.gauss_points);

    parallel_for(m, cfg.jobs, [&](std::size_t i) {
        const double ti = u.times[i];
        std::vector<cplx> acc(n, cplx{});
        std::vector<cplx> interp(n);
        if (ti > 0.0) {
            for (std::size_t q = 0; q < unit.nodes.size(); ++q) {
                const double tau = ti * unit.nodes[q];
                const double w = ti * unit.weights[q];
                const std::vector<double> c = barycentric_coefficients(u.times, tau);
                std::fill(interp.begin(), interp.end(), cplx{});
                for (std::size_t j = 0; j < m; ++j) {
                    if (c[j] == 0.0) continue;
                    const auto nj = nl[j].coeffs();
                    for (std::size_t k = 0; k < n; ++k) interp[k] += c[j] * nj[k];
                }
                const double lag = ti - tau;
                for (std::size_t k = 0; k < n; ++k) {
                    if (interp[k] != cplx{}) acc[k] += w * std::exp(lag * l[k]) * interp[k];
                }
            }
        }
        std::vector<cplx> res(n);
        const auto p = phi.coeffs();
        for (std::size_t k = 0; k < n; ++k) res[k] = std::exp(ti * l[k]) * p[k] - 0.5 * acc[k];
        SpectralField2D f(g, std::move(res));
        if (!f.all_finite()) throw BlowUpError(i, "duhamel_map produced non-finite values");
        out.fields[i] = std::move(f);
    });
    return out;
}

double sup_norm(const NodalTrajectory& u, double s) {
    double m = 0.0;
    for (const auto& f : u.fields) m = std::max(m, spectral::sobolev_norm(f, s, 0.0));
    return m;
}

double sup_distance(const NodalTrajectory& u, const NodalTrajectory& v, double s) {
    if (u.fields.size() != v.fields.size()) throw std::invalid_argument("sup_distance: node counts differ");
    double m = 0.0;
    for (std::size_t i = 0; i < u.fields.size(); ++i) {
        m = std::max(m, spectral::sobolev_norm(u.fields[i] - v.fields[i], s, 0.0));
    }
    return m;
}

std::string to_string(PicardStatus status) {
    switch (status) {
        case PicardStatus::Converged: return "converged";
        case PicardStatus::Diverged: return "diverged";
        case PicardStatus::MaxIterations: return "max_iterations";
    }
    return "unknown";
}

IterateSequence iterate_to_fixed_point(const SpectralField2D& phi, const PicardConfig& cfg,
                                       const SymbolParams& params, bool keep_iterates) {
    cfg.validate();
    IterateSequence seq;
    NodalTrajectory current;
    current.times = chebyshev_lobatto(0.0, cfg.horizon, cfg.storage_nodes);
    current.fields.assign(current.times.size(), SpectralField2D(phi.grid()));
    seq.iterates.push_back(current);
    seq.sup_norms.push_back(0.0);
    seq.differences.push_back(0.0);
    seq.ratios.push_back(0.0);

    std::size_t growing = 0;
    for (std::size_t k = 1; k <= cfg.max_iterations; ++k) {
        NodalTrajectory next;
        try {
            next = duhamel_map(current, phi, cfg, params);
        } catch (const BlowUpError& e) {
            seq.status = PicardStatus::Diverged;
            seq.note = std::string("non-finite iterate: ") + e.what();
            return seq;
        }
        const double d = sup_distance(next, current, cfg.norm_s);
        const double norm = sup_norm(next, cfg.norm_s);
        const double prev = seq.differences.back();
        seq.differences.push_back(d);
        seq.sup_norms.push_back(norm);
        seq.ratios.push_back(k >= 2 && prev > 0.0 ? d / prev : 0.0);
        if (!keep_iterates && seq.iterates.size() == 2) seq.iterates.erase(seq.iterates.begin());
        seq.iterates.push_back(next);
        current = std::move(next);

        if (!std::isfinite(d) || !std::isfinite(norm)) {
            seq.status = PicardStatus::Diverged;
            seq.note = "non-finite difference";
            return seq;
        }
        if (d <= cfg.tolerance * norm) {
            seq.status = PicardStatus::Converged;
            return seq;
        }
        growing = (k >= 2 && d > prev) ? growing + 1 : 0;
        if (growing >= 3) {
            seq.status = PicardStatus::Diverged;
            seq.note = "successive differences grew for 3 consecutive iterations";
            return seq;
        }
    }
    seq.status = PicardStatus::MaxIterations;
    return seq;
}

std::vector<HorizonTrial> contraction_horizon_scan(const SpectralField2D& phi, PicardConfig cfg,
                                                   const SymbolParams& params, std::size_t max_halvings) {
    std::vector<HorizonTrial> trials;
    for (std::size_t h = 0; h <= max_halvings; ++h) {
        const IterateSequence seq = iterate_to_fixed_point(phi, cfg, params);
        trials.push_back({cfg.horizon, seq.status, seq.iterations()});
        if (seq.status == PicardStatus::Converged) break;
        cfg.horizon *= 0.5;
    }
    return trials;
}

void write_iterate_report(std::ostream& out, const IterateSequence& seq) {
    out << "k, d_k, ratio, sup_hs_norm\n" << std::setprecision(17);
    for (std::size_t k = 1; k < seq.sup_norms.size(); ++k) {
        out << k << ", " << seq.differences[k] << ", " << seq.ratios[k] << ", " << seq.sup_norms[k] << '\n';
    }
    out << "# status " << to_string(seq.status);
    if (!seq.note.empty()) out << " (" << seq.note << ")";
    out << '\n';
}

SpectralField2D gaussian_bump(const Grid2D& grid, double peak, double width) {
    if (!(width > 0.0)) throw std::invalid_argument("gaussian_bump: width must be > 0");
    // Periodized Gaussian centred in the box, built from its Fourier coefficients
    // so the datum is smooth across the periodic boundary.
    std::vector<cplx> c(grid.size());
    const double x0 = 0.5 * grid.lx(), y0 = 0.5 * grid.ly();
    for (std::size_t ix = 0; ix < grid.nx(); ++ix) {
        const double xi = grid.xi(ix);
        for (std::size_t iy = 0; iy < grid.ny(); ++iy) {
            const double eta = grid.eta(iy);
            const double amp = std::exp(-0.5 * width * width * (xi * xi + eta * eta));
            c[ix * grid.ny() + iy] = std::polar(amp, -(xi * x0 + eta * y0));
        }
    }
    SpectralField2D f(grid, std::move(c));
    double maxabs = 0.0;
    for (double x : f.to_physical()) maxabs = std::max(maxabs, std::abs(x));
    if (maxabs > 0.0) f *= peak / maxabs;
    return f;
}

SpectralField2D second_iterate_grid(const SpectralField2D& phi, double t, const SymbolParams& params,
                                    std::size_t panels, std::size_t gauss_points) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument("second_iterate_grid: t must be >= 0");
    if (panels == 0 || gauss_points == 0) throw std::invalid_argument("second_iterate_grid: empty quadrature");
    const Grid2D& g = phi.grid();
    if (t == 0.0) return SpectralField2D(g);
    const std::size_t n = g.size();
    const std::vector<cplx> l = rates(g, params);
    const GaussRule rule = composite_gauss_legendre(0.0, t, panels, gauss_points);
    std::vector<cplx> acc(n, cplx{});
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        const double tau = rule.nodes[q];
        const SpectralField2D nq = quadratic(evolution::apply_evolution(phi, tau, params));
        for (std::size_t k = 0; k < n; ++k) {
            if (nq[k] != cplx{}) acc[k] -= rule.weights[q] * std::exp((t - tau) * l[k]) * nq[k];
        }
    }
    SpectralField2D out(g, std::move(acc));
    if (!out.all_finite()) throw BlowUpError(0, "second_iterate_grid produced non-finite values");
    return out;
}

}  // namespace kpb::picard
