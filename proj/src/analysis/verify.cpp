#include "kpb/analysis/verify.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include "kpb/common/error.hpp"
#include "kpb/common/numeric.hpp"
#include "kpb/common/parallel.hpp"
#include "kpb/common/random.hpp"
#include "kpb/evolution/semigroup.hpp"

namespace kpb::analysis {

double RatioReport::max_ratio() const {
    double m = 0.0;
    for (const auto& r : rows) m = std::max(m, r.ratio);
    return m;
}

double RatioReport::median_ratio() const {
    if (rows.empty()) return 0.0;
    std::vector<double> v;
    for (const auto& r : rows) v.push_back(r.ratio);
    std::sort(v.begin(), v.end());
    const std::size_t h = v.size() / 2;
    return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

void RatioReport::append(const RatioReport& other) {
    if (other.param_names != param_names) throw DomainError("RatioReport::append: column mismatch");
    rows.insert(rows.end(), other.rows.begin(), other.rows.end());
    notes.insert(notes.end(), other.notes.begin(), other.notes.end());
}

void write_ratio_report(std::ostream& out, const RatioReport& report) {
    out << "sample_id";
    for (const auto& p : report.param_names) out << ", " << p;
    out << ", lhs, rhs, ratio\n" << std::setprecision(17);
    for (const auto& r : report.rows) {
        out << r.sample_id;
        for (double p : r.params) out << ", " << p;
        out << ", " << r.lhs << ", " << r.rhs << ", " << r.ratio << '\n';
    }
    for (const auto& n : report.notes) out << "# note " << n << '\n';
    out << "# summary " << report.name << " samples=" << report.rows.size() << " max_ratio=" << report.max_ratio()
        << " median_ratio=" << report.median_ratio() << '\n';
}

SpectralField2D ensemble_member(const EnsembleSpec& spec, std::size_t sample, std::uint64_t stream) {
    const Grid2D& g = spec.grid;
    if (spec.max_mode_x < 1 || spec.max_mode_y < 0 || spec.max_mode_x > g.dealias_cutoff_x() ||
        spec.max_mode_y > g.dealias_cutoff_y()) {
        throw DomainError("ensemble_member: profile modes do not fit the dealiased band of the grid");
    }
    const CounterRng rng(spec.seed);
    SpectralField2D f(g);
    for (int j = 1; j <= spec.max_mode_x; ++j) {
        for (int k = -spec.max_mode_y; k <= spec.max_mode_y; ++k) {
            const double xi = g.dxi() * j, eta = g.deta() * k;
            const double amp = spec.amplitude * std::pow(1.0 + xi * xi + eta * eta, -0.5 * spec.decay);
            const double re = rng.normal({stream, sample, key(j), key(k), 0});
            const double im = rng.normal({stream, sample, key(j), key(k), 1});
            f.set_mode(j, k, amp * cplx{re, im});
        }
    }
    return f;
}

SpaceTimeField localized_free_wave(const SpectralField2D& phi, double window_length, std::size_t nt,
                                   double half_width, const SymbolParams& params) {
    const double tc = 0.5 * window_length;
    if (!(half_width > 0.0) || half_width > tc) throw DomainError("localized_free_wave: support exceeds the window");
    return SpaceTimeField::from_function(
        phi.grid(), window_length, nt,
        [&](double t) {
            const double cut = cutoff_eta(2.0 * (t - tc) / half_width);
            if (cut == 0.0) return SpectralField2D(phi.grid());
            SpectralField2D w = evolution::apply_evolution(phi, t - tc, params);
            w *= cut;
            return w;
        },
        Windowing::Preapplied);
}

namespace {

DyadicDecomposition pick(const std::optional<DyadicDecomposition>& d, const SpaceTimeField& u,
                         const SymbolParams& params) {
    return d ? *d : covering_decomposition(u, params);
}

}  // namespace

RatioReport verify_free_term_estimate(const EnsembleSpec& ensemble, const FreeTermConfig& cfg,
                                      const SymbolParams& params, const std::optional<DyadicDecomposition>& decomp) {
    RatioReport rep;
    rep.name = "free_term";
    rep.param_names = {"s", "window_length", "nt"};
    std::vector<std::optional<RatioRow>> rows(ensemble.samples);
    parallel_for(ensemble.samples, cfg.jobs, [&](std::size_t i) {
        const SpectralField2D phi = ensemble_member(ensemble, i);
        const double rhs = sobolev_norm(phi, cfg.s, 0.0);
        if (rhs == 0.0) return;
        // eta = 1 on [-1, 1]: psi(t) = eta(t) is localized_free_wave with half-width 2.
        const SpaceTimeField u = localized_free_wave(phi, cfg.window_length, cfg.nt, 2.0, params);
        const double lhs = bourgain_norm(u, NormSpec{0.5, cfg.s, 0.0, 1.0}, pick(decomp, u, params), params);
        rows[i] = RatioRow{i, {cfg.s, cfg.window_length, static_cast<double>(cfg.nt)}, lhs, rhs, lhs / rhs};
    });
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i]) rep.rows.push_back(*rows[i]);
        else rep.notes.push_back("sample " + std::to_string(i) + " skipped: zero datum");
    }
    return rep;
}

RatioReport verify_bilinear_estimate(const EnsembleSpec& ensemble, const BilinearConfig& cfg,
                                     const SymbolParams& params, const std::optional<DyadicDecomposition>& decomp) {
    RatioReport rep;
    rep.name = "bilinear";
    rep.param_names = {"s", "T", "window_length", "nt"};
    std::vector<std::optional<RatioRow>> rows(ensemble.samples);
    parallel_for(ensemble.samples, cfg.jobs, [&](std::size_t i) {
        const SpectralField2D phi1 = ensemble_member(ensemble, i, 0);
        const SpectralField2D phi2 = ensemble_member(ensemble, i, 1);
        if (phi1.is_zero() || phi2.is_zero()) return;
        // eta(2t/T) vanishes for |t| >= T.
        const SpaceTimeField u = localized_free_wave(phi1, cfg.window_length, cfg.nt, cfg.T, params);
        const SpaceTimeField v = localized_free_wave(phi2, cfg.window_length, cfg.nt, cfg.T, params);
        const SpaceTimeField w = x_derivative_of_product(u, v);
        const DyadicDecomposition d = pick(decomp, w, params);
        const double nu = bourgain_norm(u, NormSpec{0.5, cfg.s, 0.0, 1.0}, d, params);
        const double nv = bourgain_norm(v, NormSpec{0.5, cfg.s, 0.0, 1.0}, d, params);
        const double lhs = bourgain_norm(w, NormSpec{-0.5, cfg.s, 0.0, 1.0}, d, params);
        const double rhs = nu * nv;
        if (rhs == 0.0) return;
        rows[i] = RatioRow{i, {cfg.s, cfg.T, cfg.window_length, static_cast<double>(cfg.nt)}, lhs, rhs, lhs / rhs};
    });
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i]) rep.rows.push_back(*rows[i]);
        else rep.notes.push_back("sample " + std::to_string(i) + " skipped: zero datum");
    }
    return rep;
}

TimeScan bilinear_time_scan(const EnsembleSpec& ensemble, BilinearConfig cfg, const std::vector<double>& Ts,
                            const SymbolParams& params) {
    if (Ts.size() < 2) throw DomainError("bilinear_time_scan: need at least two values of T");
    TimeScan scan;
    std::vector<double> lx, ly;
    for (double T : Ts) {
        cfg.T = T;
        const RatioReport rep = verify_bilinear_estimate(ensemble, cfg, params);
        scan.T.push_back(T);
        scan.max_ratio.push_back(rep.max_ratio());
        lx.push_back(std::log(T));
        ly.push_back(std::log(rep.max_ratio()));
    }
    scan.exponent = least_squares_line(lx, ly).slope;
    return scan;
}

double modulation_overlap(double omega, double a1, double a2, double a3) {
    if (!(a1 >= 0.0) || !(a2 >= 0.0) || !(a3 >= 0.0)) throw DomainError("modulation_overlap: negative half-width");
    const double lo = std::min(a1, a2), hi = std::max(a1, a2), sum = a1 + a2;
    // tail(y) = measure of {a + b >= y}, y >= 0
    auto tail = [&](double y) {
        if (y >= sum) return 0.0;
        if (y >= hi - lo) return 0.5 * (sum - y) * (sum - y);
        return 2.0 * lo * lo + 2.0 * lo * (hi - lo - y);
    };
    const double total = 4.0 * a1 * a2;
    auto cumulative = [&](double x) { return x <= 0.0 ? tail(-x) : total - tail(x); };
    return cumulative(a3 - omega) - cumulative(-a3 - omega);
}

double BandProfile::xi_lo() const { return std::ldexp(1.0, k - 1); }
double BandProfile::xi_hi() const { return std::ldexp(1.0, k); }

BandProfile BandProfile::indicator(int k, double mu_extent, std::size_t cells) {
    if (cells == 0 || !(mu_extent > 0.0)) throw DomainError("BandProfile: empty lattice");
    BandProfile p;
    p.k = k;
    p.mu_extent = mu_extent;
    p.cells = cells;
    p.values.assign(2 * (cells + 1) * (cells + 1), 1.0);
    return p;
}

BandProfile BandProfile::random(int k, double mu_extent, std::size_t cells, std::uint64_t seed,
                                std::uint64_t sample, std::uint64_t index) {
    BandProfile p = indicator(k, mu_extent, cells);
    const CounterRng rng(seed);
    for (std::size_t n = 0; n < p.values.size(); ++n) p.values[n] = rng.uniform({sample, index, n});
    return p;
}

double BandProfile::operator()(double xi, double mu) const {
    const double a = std::abs(xi);
    const double lo = xi_lo(), hi = xi_hi();
    if (a < lo || a > hi || std::abs(mu) > mu_extent) return 0.0;
    const double c = static_cast<double>(cells);
    const double u = std::min((a - lo) / (hi - lo) * c, c);
    const double v = std::min((mu + mu_extent) / (2.0 * mu_extent) * c, c);
    const std::size_t iu = std::min(static_cast<std::size_t>(u), cells - 1);
    const std::size_t iv = std::min(static_cast<std::size_t>(v), cells - 1);
    const double fu = u - static_cast<double>(iu), fv = v - static_cast<double>(iv);
    const std::size_t stride = cells + 1;
    const double* base = values.data() + (xi < 0.0 ? stride * stride : 0);
    const double v00 = base[iu * stride + iv], v01 = base[iu * stride + iv + 1];
    const double v10 = base[(iu + 1) * stride + iv], v11 = base[(iu + 1) * stride + iv + 1];
    return (1.0 - fu) * ((1.0 - fv) * v00 + fv * v01) + fu * ((1.0 - fv) * v10 + fv * v11);
}

double BandProfile::square_integral() const {
    // g is bilinear on each lattice cell, so 2-point Gauss per cell integrates g^2 exactly.
    const GaussRule ru = composite_gauss_legendre(xi_lo(), xi_hi(), cells, 2);
    const GaussRule rv = composite_gauss_legendre(-mu_extent, mu_extent, cells, 2);
    double s = 0.0;
    for (double sign : {1.0, -1.0})
        for (std::size_t a = 0; a < ru.nodes.size(); ++a)
            for (std::size_t b = 0; b < rv.nodes.size(); ++b) {
                const double g = (*this)(sign * ru.nodes[a], rv.nodes[b]);
                s += ru.weights[a] * rv.weights[b] * g * g;
            }
    return s;
}

BandProfile& BandProfile::operator*=(double a) {
    if (a < 0.0) throw DomainError("BandProfile: profiles are non-negative");
    for (double& v : values) v *= a;
    return *this;
}

namespace {

struct Interval {
    double lo, hi;
};

// Values xi1 with |xi1| in band 1 and |xi - xi1| in band 2.
std::vector<Interval> admissible_xi1(double xi, const BandProfile& g1, const BandProfile& g2) {
    std::vector<Interval> out;
    for (double s1 : {1.0, -1.0}) {
        const double a = s1 > 0 ? g1.xi_lo() : -g1.xi_hi(), b = s1 > 0 ? g1.xi_hi() : -g1.xi_lo();
        for (double s2 : {1.0, -1.0}) {
            // xi - xi1 in s2 * [lo2, hi2]  <=>  xi1 in xi - s2 * [lo2, hi2]
            const double c = s2 > 0 ? xi - g2.xi_hi() : xi + g2.xi_lo();
            const double d = s2 > 0 ? xi - g2.xi_lo() : xi + g2.xi_hi();
            const double lo = std::max(a, c), hi = std::min(b, d);
            if (hi > lo) out.push_back({lo, hi});
        }
    }
    return out;
}

}  // namespace

double trilinear_dyadic_integral(const BandProfile& g1, const BandProfile& g2, const BandProfile& g3,
                                 const int (&j)[3], std::size_t refinement, const SymbolParams& params,
                                 double* support) {
    if (refinement == 0) throw DomainError("trilinear_dyadic_integral: refinement must be >= 1");
    const double a1 = std::ldexp(1.0, j[0]), a2 = std::ldexp(1.0, j[1]), a3 = std::ldexp(1.0, j[2]);
    const std::size_t panels = g3.cells * refinement;
    const GaussRule rxi = composite_gauss_legendre(g3.xi_lo(), g3.xi_hi(), panels, 2);
    const GaussRule rmu = composite_gauss_legendre(-g3.mu_extent, g3.mu_extent, panels, 2);
    const std::size_t inner_panels = std::max(g1.cells, g2.cells) * refinement;
    auto p = [&](double xi, double mu) { return spectral::evaluate_symbol(xi, mu, params); };

    std::vector<double> terms;
    double measure = 0.0;
    for (double sign : {1.0, -1.0}) {
        for (std::size_t a = 0; a < rxi.nodes.size(); ++a) {
            const double xi = sign * rxi.nodes[a];
            const std::vector<Interval> xs = admissible_xi1(xi, g1, g2);
            if (xs.empty()) continue;
            for (std::size_t b = 0; b < rmu.nodes.size(); ++b) {
                const double mu = rmu.nodes[b];
                const double w3 = rxi.weights[a] * rmu.weights[b];
                const double f3 = g3(xi, mu);
                const double p3 = p(xi, mu);
                const double mlo = std::max(-g1.mu_extent, mu - g2.mu_extent);
                const double mhi = std::min(g1.mu_extent, mu + g2.mu_extent);
                if (!(mhi > mlo)) continue;
                const GaussRule rmu1 = composite_gauss_legendre(mlo, mhi, inner_panels, 2);
                double acc = 0.0;
                for (const Interval& iv : xs) {
                    measure += w3 * (iv.hi - iv.lo) * (mhi - mlo);
                    const GaussRule rxi1 = composite_gauss_legendre(iv.lo, iv.hi, inner_panels, 2);
                    for (std::size_t c = 0; c < rxi1.nodes.size(); ++c) {
                        const double xi1 = rxi1.nodes[c], xi2 = xi - xi1;
                        for (std::size_t d = 0; d < rmu1.nodes.size(); ++d) {
                            const double mu1 = rmu1.nodes[d], mu2 = mu - mu1;
                            const double f = g1(xi1, mu1) * g2(xi2, mu2);
                            if (f == 0.0) continue;
                            const double omega = p(xi1, mu1) + p(xi2, mu2) - p3;
                            acc += rxi1.weights[c] * rmu1.weights[d] * f * modulation_overlap(omega, a1, a2, a3);
                        }
                    }
                }
                terms.push_back(w3 * f3 * acc);
            }
        }
    }
    if (support) *support = measure;
    return pairwise_sum(terms);
}

namespace {

/// True if {|xi1| in I1, |xi - xi1| in I2, |xi| in I3} has positive measure for the level bands I_i.
bool levels_compatible(const int (&k)[3]) {
    double lo[3], hi[3];
    for (int i = 0; i < 3; ++i) {
        lo[i] = std::ldexp(1.0, k[i] - 1);
        hi[i] = std::ldexp(1.0, k[i]);
    }
    // |xi1 + xi2| covers [lo1 + lo2, hi1 + hi2] (same signs) and the differences (opposite signs).
    const double same_lo = lo[0] + lo[1], same_hi = hi[0] + hi[1];
    const double diff_lo = std::max({0.0, lo[0] - hi[1], lo[1] - hi[0]});
    const double diff_hi = std::max(hi[0] - lo[1], hi[1] - lo[0]);
    auto overlap = [&](double a, double b) { return std::min(b, hi[2]) - std::max(a, lo[2]) > 0.0; };
    return overlap(same_lo, same_hi) || overlap(diff_lo, diff_hi);
}

}  // namespace

RatioReport verify_dyadic_convolution(const DyadicConvolutionConfig& cfg, const SymbolParams& params) {
    if (cfg.trials == 0) throw DomainError("verify_dyadic_convolution: trials must be >= 1");
    if (cfg.k_min > cfg.k_max || cfg.j_min > cfg.j_max || cfg.j_min < 0) {
        throw DomainError("verify_dyadic_convolution: empty (k, j) lattice");
    }
    RatioReport rep;
    rep.name = "dyadic_convolution";
    rep.param_names = {"k1", "k2", "k3", "j1", "j2", "j3", "indicator"};
    const CounterRng rng(cfg.seed);
    const int kspan = cfg.k_max - cfg.k_min + 1, jspan = cfg.j_max - cfg.j_min + 1;

    auto evaluate = [&](std::size_t id, const int (&k)[3], const int (&j)[3], bool indicator) -> std::optional<RatioRow> {
        BandProfile g[3];
        for (int i = 0; i < 3; ++i) {
            g[i] = indicator ? BandProfile::indicator(k[i], cfg.mu_extent, cfg.profile_cells)
                             : BandProfile::random(k[i], cfg.mu_extent, cfg.profile_cells, cfg.seed, id,
                                                   static_cast<std::uint64_t>(i));
            g[i] *= cfg.amplitude;
        }
        double support = 0.0;
        const double lhs = trilinear_dyadic_integral(g[0], g[1], g[2], j, cfg.refinement, params, &support);
        if (support == 0.0) return std::nullopt;
        double rhs = std::pow(2.0, 0.5 * (j[0] + j[1] + j[2]) - 0.5 * (k[0] + k[1] + k[2]));
        for (int i = 0; i < 3; ++i) rhs *= std::sqrt(2.0 * std::ldexp(1.0, j[i]) * g[i].square_integral());
        if (rhs == 0.0) return std::nullopt;
        return RatioRow{id,
                        {double(k[0]), double(k[1]), double(k[2]), double(j[0]), double(j[1]), double(j[2]),
                         indicator ? 1.0 : 0.0},
                        lhs, rhs, lhs / rhs};
    };

    // Two indicator baselines follow the random trials. For k = (1, 1, 1) the
    // constraint xi = xi1 + xi2 with all |xi_i| in [1, 2] leaves a null set, so
    // that case is reported as skipped; k = (1, 1, 2) is the first non-degenerate one.
    std::vector<std::optional<RatioRow>> rows(cfg.trials + 2);
    parallel_for(cfg.trials + 2, cfg.jobs, [&](std::size_t t) {
        if (t >= cfg.trials) {
            const int k[3] = {1, 1, t == cfg.trials ? 1 : 2}, j[3] = {0, 0, 0};
            rows[t] = evaluate(t, k, j, true);
            return;
        }
        // Level triples whose bands cannot satisfy xi = xi1 + xi2 on a set of positive
        // measure are redrawn, so every trial contributes a row.
        int k[3], j[3];
        for (std::uint64_t attempt = 0; attempt < 64; ++attempt) {
            for (int i = 0; i < 3; ++i) {
                const auto key = static_cast<std::uint64_t>(i);
                k[i] = cfg.k_min + static_cast<int>(rng.bits({t, attempt, 100 + key}) % kspan);
                j[i] = cfg.j_min + static_cast<int>(rng.bits({t, attempt, 200 + key}) % jspan);
            }
            if (levels_compatible(k)) break;
        }
        rows[t] = evaluate(t, k, j, false);
    });
    for (std::size_t t = 0; t < rows.size(); ++t) {
        if (rows[t]) rep.rows.push_back(*rows[t]);
        else rep.notes.push_back("trial " + std::to_string(t) + " skipped: empty support region");
    }
    return rep;
}

}  // namespace kpb::analysis
