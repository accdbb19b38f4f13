#include "kpb/illposed/counterexample.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <optional>

#include "kpb/common/error.hpp"
#include "kpb/common/numeric.hpp"
#include "kpb/common/parallel.hpp"
#include "kpb/common/random.hpp"

namespace kpb::illposed {

namespace {

const double kSqrt3 = std::sqrt(3.0);

double symbol(double xi, double eta) { return xi * xi * xi + eta * eta / xi; }

}  // namespace

void CounterexampleSpec::validate() const {
    int e = 0;
    if (!(N >= 8.0) || std::frexp(N, &e) != 0.5) throw DomainError("CounterexampleSpec: N must be a power of two >= 8");
    if (!(eps > 0.0) || !std::isfinite(eps)) throw DomainError("CounterexampleSpec: eps must be > 0");
    if (!std::isfinite(s)) throw DomainError("CounterexampleSpec: s must be finite");
    if (resolution < 2) throw DomainError("CounterexampleSpec: resolution must be >= 2");
}

double CounterexampleSpec::t_N() const { return std::pow(N, -3.0 - eps); }

double CounterexampleSpec::amplitude() const { return std::pow(N, -1.5 - s); }

double Rect::area() const { return empty() ? 0.0 : (x1 - x0) * (y1 - y0); }

bool Rect::contains(double x, double y) const { return x >= x0 && x <= x1 && y >= y0 && y <= y1; }

Rect Rect::intersect(const Rect& o) const {
    return {std::max(x0, o.x0), std::min(x1, o.x1), std::max(y0, o.y0), std::min(y1, o.y1)};
}

Rect Rect::reflect_about(double xi, double eta) const { return {xi - x1, xi - x0, eta - y1, eta - y0}; }

FrequencyRectangles FrequencyRectangles::of(double N) {
    const double n2 = N * N;
    FrequencyRectangles r;
    r.a_pos = {N / 2.0, 3.0 * N / 4.0, -6.0 * n2, 6.0 * n2};
    r.a_neg = r.a_pos.reflect_about(0.0, 0.0);
    r.b_pos = {N, 2.0 * N, kSqrt3 * n2, (kSqrt3 + 1.0) * n2};
    r.b_neg = r.b_pos.reflect_about(0.0, 0.0);
    return r;
}

double resonance_chi(double xi, double xi1, double eta, double eta1) {
    const double xi2 = xi - xi1;
    if (xi == 0.0 || xi1 == 0.0 || xi2 == 0.0) throw DomainError("resonance_chi: degenerate frequencies");
    const double q = eta * xi1 - eta1 * xi;
    return 3.0 * xi * xi1 * xi2 - q * q / (xi * xi1 * xi2);
}

double resonance_lambda(double xi, double xi1, double eta1) {
    if (xi1 == 0.0) throw DomainError("resonance_lambda: xi1 = 0");
    return eta1 + (xi - xi1) * (eta1 - kSqrt3 * xi * xi1) / xi1;
}

cplx second_iterate_kernel(double t, double xi, double xi1, double chi) {
    const double damping = std::exp(-t * xi * xi);
    const cplx z{2.0 * xi1 * (xi - xi1), -chi};
    if (std::abs(z) < 1e-14) return t * damping;
    const cplx w = t * z;
    // (e^w - 1) / w
    cplx e;
    if (std::abs(w) < 1e-2) {
        e = 1.0 + w / 2.0 * (1.0 + w / 3.0 * (1.0 + w / 4.0 * (1.0 + w / 5.0 * (1.0 + w / 6.0))));
    } else {
        e = (std::exp(w) - 1.0) / w;
    }
    return t * damping * e;
}

PhiHat::PhiHat(const CounterexampleSpec& spec)
    : spec_(spec), rects_(FrequencyRectangles::of(spec.N)), amp_(spec.amplitude()) {
    spec.validate();
}

double PhiHat::operator()(double xi, double eta) const {
    for (const Rect& r : rects_.all())
        if (r.contains(xi, eta)) return amp_;
    return 0.0;
}

PhiHat build_phi_hat(const CounterexampleSpec& spec) { return PhiHat(spec); }

double phi_sobolev_norm(const CounterexampleSpec& spec) {
    const PhiHat phi(spec);
    double total = 0.0;
    for (const Rect& r : phi.rects().all()) {
        const GaussRule g = composite_gauss_legendre(r.x0, r.x1, 4, 16);
        double line = 0.0;
        for (std::size_t i = 0; i < g.nodes.size(); ++i) line += g.weights[i] * std::pow(1.0 + g.nodes[i] * g.nodes[i], spec.s);
        total += line * (r.y1 - r.y0);
    }
    return phi.amplitude() * std::sqrt(total);
}

Rect output_window(double N) {
    const double n2 = N * N;
    return {1.5 * N, 2.0 * N, (kSqrt3 - 5.0) * n2, (kSqrt3 + 6.0) * n2};
}

double ConvolutionRegion::measure() const {
    double m = 0.0;
    for (const Rect& r : pieces) m += r.area();
    return m;
}

namespace {

ConvolutionRegion pair_region(double xi, double eta, const std::vector<Rect>& first, const std::vector<Rect>& second) {
    ConvolutionRegion out;
    for (const Rect& p : first)
        for (const Rect& q : second) {
            const Rect r = p.intersect(q.reflect_about(xi, eta));
            if (!r.empty()) out.pieces.push_back(r);
        }
    return out;
}

}  // namespace

ConvolutionRegion region_D(double xi, double eta, const CounterexampleSpec& spec) {
    const FrequencyRectangles r = FrequencyRectangles::of(spec.N);
    ConvolutionRegion d1 = pair_region(xi, eta, r.b_pieces(), r.a_pieces());
    const ConvolutionRegion d2 = pair_region(xi, eta, r.a_pieces(), r.b_pieces());
    d1.pieces.insert(d1.pieces.end(), d2.pieces.begin(), d2.pieces.end());
    return d1;
}

ConvolutionRegion full_support(double xi, double eta, const CounterexampleSpec& spec) {
    const FrequencyRectangles r = FrequencyRectangles::of(spec.N);
    return pair_region(xi, eta, r.all(), r.all());
}

double region_D_measure(double xi, double N) {
    const double len = std::clamp(std::min(xi - 1.5 * N, N / 4.0), 0.0, N / 4.0);
    return 2.0 * N * N * len;
}

cplx second_iterate_at(const PhiHat& phi, double t, double xi, double eta, Support support) {
    if (!(t >= 0.0)) throw DomainError("second_iterate_at: t must be >= 0");
    if (t == 0.0 || xi == 0.0) return {};
    const CounterexampleSpec& spec = phi.spec();
    const ConvolutionRegion region =
        support == Support::RegionD ? region_D(xi, eta, spec) : full_support(xi, eta, spec);
    const GaussRule g = gauss_legendre(spec.resolution);
    std::vector<cplx> terms;
    for (const Rect& r : region.pieces) {
        const double hx = 0.5 * (r.x1 - r.x0), cx = 0.5 * (r.x1 + r.x0);
        const double hy = 0.5 * (r.y1 - r.y0), cy = 0.5 * (r.y1 + r.y0);
        for (std::size_t a = 0; a < g.nodes.size(); ++a) {
            const double xi1 = cx + hx * g.nodes[a];
            if (xi1 == xi) continue;
            for (std::size_t b = 0; b < g.nodes.size(); ++b) {
                const double eta1 = cy + hy * g.nodes[b];
                const double chi = resonance_chi(xi, xi1, eta, eta1);
                terms.push_back(g.weights[a] * g.weights[b] * hx * hy * second_iterate_kernel(t, xi, xi1, chi));
            }
        }
    }
    const double amp2 = phi.amplitude() * phi.amplitude();
    const cplx integral = amp2 * pairwise_sum(terms);
    return cplx{0.0, -xi} * std::polar(1.0, t * symbol(xi, eta)) * integral;
}

WindowSamples second_iterate_quadrature(const CounterexampleSpec& spec, double t, Support support, unsigned jobs) {
    spec.validate();
    const PhiHat phi(spec);
    const Rect w = output_window(spec.N);
    const std::size_t r = spec.resolution;
    GaussRule gx = composite_gauss_legendre(w.x0, 1.75 * spec.N, 1, r);
    const GaussRule gx2 = composite_gauss_legendre(1.75 * spec.N, w.x1, 1, r);
    gx.nodes.insert(gx.nodes.end(), gx2.nodes.begin(), gx2.nodes.end());
    gx.weights.insert(gx.weights.end(), gx2.weights.begin(), gx2.weights.end());
    const GaussRule gy = composite_gauss_legendre(w.y0, w.y1, 8, r);

    WindowSamples out;
    const std::size_t nx = gx.nodes.size(), ny = gy.nodes.size();
    out.xi.resize(nx * ny);
    out.eta.resize(nx * ny);
    out.weight.resize(nx * ny);
    out.value.resize(nx * ny);
    parallel_for(nx, jobs, [&](std::size_t a) {
        for (std::size_t b = 0; b < ny; ++b) {
            const std::size_t i = a * ny + b;
            out.xi[i] = gx.nodes[a];
            out.eta[i] = gy.nodes[b];
            out.weight[i] = gx.weights[a] * gy.weights[b];
            out.value[i] = second_iterate_at(phi, t, gx.nodes[a], gy.nodes[b], support);
        }
    });
    return out;
}

double windowed_sobolev_norm(const WindowSamples& samples, double s) {
    std::vector<double> terms(samples.value.size());
    for (std::size_t i = 0; i < terms.size(); ++i) {
        terms[i] = samples.weight[i] * std::pow(1.0 + samples.xi[i] * samples.xi[i], s) * std::norm(samples.value[i]);
    }
    return std::sqrt(pairwise_sum(terms));
}

WindowSamples second_iterate_lattice(const CounterexampleSpec& spec, double t, double dxi, double deta) {
    spec.validate();
    if (!(dxi > 0.0) || !(deta > 0.0)) throw DomainError("second_iterate_lattice: spacings must be > 0");
    const PhiHat phi(spec);
    const Rect w = output_window(spec.N);
    const FrequencyRectangles rects = FrequencyRectangles::of(spec.N);
    // lattice points of the data support
    struct Node {
        long long j, k;
    };
    std::vector<Node> support;
    for (const Rect& r : rects.all()) {
        for (long long j = static_cast<long long>(std::ceil(r.x0 / dxi)); j * dxi <= r.x1; ++j)
            for (long long k = static_cast<long long>(std::ceil(r.y0 / deta)); k * deta <= r.y1; ++k)
                if (r.contains(j * dxi, k * deta)) support.push_back({j, k});
    }
    // rectangles overlap only in A_pos/A_neg style reflections, which are disjoint; no duplicates
    const double amp2 = phi.amplitude() * phi.amplitude();
    WindowSamples out;
    for (long long j = static_cast<long long>(std::ceil(w.x0 / dxi)); j * dxi <= w.x1; ++j) {
        for (long long k = static_cast<long long>(std::ceil(w.y0 / deta)); k * deta <= w.y1; ++k) {
            const double xi = j * dxi, eta = k * deta;
            std::vector<cplx> terms;
            for (const Node& n : support) {
                const double xi2 = (j - n.j) * dxi, eta2 = (k - n.k) * deta;
                if (phi(xi2, eta2) == 0.0) continue;
                const double xi1 = n.j * dxi, eta1 = n.k * deta;
                terms.push_back(second_iterate_kernel(t, xi, xi1, resonance_chi(xi, xi1, eta, eta1)));
            }
            const cplx sum = amp2 * dxi * deta * pairwise_sum(terms);
            out.xi.push_back(xi);
            out.eta.push_back(eta);
            out.weight.push_back(dxi * deta);
            out.value.push_back(cplx{0.0, -xi} * std::polar(1.0, t * symbol(xi, eta)) * sum);
        }
    }
    return out;
}

ChiBoundReport verify_chi_bound(const CounterexampleSpec& spec, std::size_t samples, std::uint64_t seed) {
    spec.validate();
    if (samples == 0) throw DomainError("verify_chi_bound: samples must be >= 1");
    const CounterRng rng(seed);
    const Rect w = output_window(spec.N);
    const double n3 = spec.N * spec.N * spec.N;
    ChiBoundReport rep;
    rep.N = spec.N;
    rep.samples = samples;
    rep.min_damping = std::exp(-spec.N * spec.N * spec.t_N());
    std::uint64_t draw = 0;
    for (std::size_t i = 0; i < samples; ++i) {
        for (;;) {
            const std::uint64_t d = draw++;
            const double xi = w.x0 + (w.x1 - w.x0) * rng.uniform({d, 0});
            const double eta = w.y0 + (w.y1 - w.y0) * rng.uniform({d, 1});
            const ConvolutionRegion region = region_D(xi, eta, spec);
            const double m = region.measure();
            if (!(m > 0.0)) continue;
            double pick = m * rng.uniform({d, 2});
            const Rect* r = &region.pieces.back();
            for (const Rect& p : region.pieces) {
                if (pick < p.area()) {
                    r = &p;
                    break;
                }
                pick -= p.area();
            }
            const double xi1 = r->x0 + (r->x1 - r->x0) * rng.uniform({d, 3});
            const double eta1 = r->y0 + (r->y1 - r->y0) * rng.uniform({d, 4});
            if (xi1 == xi || xi1 == 0.0) continue;
            const double chi = resonance_chi(xi, xi1, eta, eta1);
            rep.max_chi_ratio = std::max(rep.max_chi_ratio, std::abs(chi) / n3);
            rep.max_denominator_ratio =
                std::max(rep.max_denominator_ratio, std::abs(cplx{2.0 * xi1 * (xi - xi1), -chi}) / n3);
            break;
        }
    }
    return rep;
}

InflationReport inflation_scan(double s, double eps, const std::vector<double>& N_list, std::size_t resolution,
                               unsigned jobs, std::size_t exclude_smallest) {
    if (N_list.size() < 4) throw DomainError("inflation_scan: need at least 4 values of N");
    for (std::size_t i = 1; i < N_list.size(); ++i)
        if (!(N_list[i] > N_list[i - 1])) throw DomainError("inflation_scan: N_list must be ascending");
    InflationReport rep;
    rep.s = s;
    rep.eps = eps;
    rep.excluded = exclude_smallest;
    rep.theoretical = -s - 0.5 - eps;
    rep.rows.resize(N_list.size());
    parallel_for(N_list.size(), jobs, [&](std::size_t i) {
        CounterexampleSpec spec{N_list[i], s, eps, resolution};
        spec.validate();
        InflationRow& row = rep.rows[i];
        row.N = spec.N;
        row.t_N = spec.t_N();
        row.log2N = std::log2(spec.N);
        row.hs_norm = windowed_sobolev_norm(second_iterate_quadrature(spec, row.t_N), s);
        spec.resolution *= 2;
        const double fine = windowed_sobolev_norm(second_iterate_quadrature(spec, row.t_N), s);
        row.self_convergence = std::abs(row.hs_norm - fine) / fine;
        row.log_norm = std::log2(row.hs_norm);
        row.flagged = !std::isfinite(row.hs_norm) || !(row.hs_norm > 0.0);
    });
    std::vector<double> x, y;
    for (std::size_t i = exclude_smallest; i < rep.rows.size(); ++i) {
        if (rep.rows[i].flagged) continue;
        x.push_back(rep.rows[i].log2N);
        y.push_back(rep.rows[i].log_norm);
    }
    if (x.size() < 2) throw DomainError("inflation_scan: fewer than two usable rows");
    rep.slope = least_squares_line(x, y).slope;
    rep.pass = rep.theoretical > 0.0 ? rep.slope >= rep.theoretical - rep.margin : rep.slope <= 0.5 * rep.margin;
    return rep;
}

void write_inflation_report(std::ostream& out, const InflationReport& rep) {
    out << "N, t_N, hs_norm, log2N, log_norm\n" << std::setprecision(17);
    for (const InflationRow& r : rep.rows) {
        out << r.N << ", " << r.t_N << ", " << r.hs_norm << ", " << r.log2N << ", " << r.log_norm;
        if (r.flagged) out << "  # flagged: non-finite";
        out << '\n';
    }
    out << "# summary s=" << rep.s << " eps=" << rep.eps << " slope=" << rep.slope
        << " theoretical=" << rep.theoretical << " excluded_smallest=" << rep.excluded
        << " result=" << (rep.pass ? "pass" : "fail") << '\n';
}

}  // namespace kpb::illposed
