#include <doctest.h>

#include <cmath>
#include <sstream>

#include "kpb/common/error.hpp"
#include "kpb/common/numeric.hpp"
#include "kpb/illposed/counterexample.hpp"
#include "kpb/spectral/symbol.hpp"
#include "support/generators.hpp"

using namespace kpb;
using namespace kpb::illposed;

namespace {

const double kSqrt3 = std::sqrt(3.0);

double p(double xi, double eta) { return xi * xi * xi + eta * eta / xi; }

}  // namespace

TEST_CASE("resonance_chi examples and domain errors") {
    CHECK(resonance_chi(2, 1, 0, 0) == doctest::Approx(6.0).epsilon(1e-15));
    CHECK(resonance_chi(3, 1, 2, 1) == doctest::Approx(107.0 / 6.0).epsilon(1e-15));
    CHECK(resonance_chi(3, 2, 2, 1) == doctest::Approx(107.0 / 6.0).epsilon(1e-15));
    CHECK_THROWS_AS(resonance_chi(0, 1, 0, 0), DomainError);
    CHECK_THROWS_AS(resonance_chi(1, 0, 0, 0), DomainError);
    CHECK_THROWS_AS(resonance_chi(1, 1, 0, 0), DomainError);
}

TEST_CASE("chi properties on random samples") {
    for (int i = 0; i < 300; ++i) {
        const double n = std::ldexp(1.0, 3 + i % 6);
        const double xi = testing::random_in(4 * i, 0.3, 3.0) * n;
        const double xi1 = testing::random_in(4 * i + 1, 0.1, 2.0) * n;
        const double eta = testing::random_in(4 * i + 2, -8.0, 8.0) * n * n;
        const double eta1 = testing::random_in(4 * i + 3, -8.0, 8.0) * n * n;
        if (std::abs(xi - xi1) < 1e-3 * n) continue;
        const double chi = resonance_chi(xi, xi1, eta, eta1);
        const double scale = n * n * n * (1.0 + std::abs(chi) / (n * n * n));
        // closed form equals minus the phase mismatch of the symbol
        CHECK(std::abs(chi + (p(xi1, eta1) + p(xi - xi1, eta - eta1) - p(xi, eta))) <= 1e-9 * scale);
        CHECK(std::abs(chi - resonance_chi(xi, xi - xi1, eta, eta - eta1)) <= 1e-12 * scale);
        CHECK(std::abs(resonance_chi(xi, xi1, resonance_lambda(xi, xi1, eta1), eta1)) <= 1e-9 * n * n * n);
    }
}

TEST_CASE("second iterate kernel") {
    CHECK(second_iterate_kernel(0.0, 3.0, 1.0, 5.0) == cplx{});
    // removable singularity
    CHECK(second_iterate_kernel(0.5, 2.0, 0.0, 0.0) == cplx{0.5 * std::exp(-2.0), 0.0});

    // K e^{i t P} = (e^{t (L1 + L2)} - e^{t L}) / (L1 + L2 - L) with the semigroup rates
    const spectral::SymbolParams params{};
    for (int i = 0; i < 50; ++i) {
        const double xi = testing::random_in(6 * i, 1.0, 4.0);
        const double xi1 = testing::random_in(6 * i + 1, 0.2, 3.0);
        const double eta = testing::random_in(6 * i + 2, -4.0, 4.0);
        const double eta1 = testing::random_in(6 * i + 3, -4.0, 4.0);
        const double t = testing::random_in(6 * i + 4, 1e-4, 0.3);
        if (std::abs(xi - xi1) < 1e-2) continue;
        const cplx l = spectral::linear_rate(xi, eta, params);
        const cplx l1 = spectral::linear_rate(xi1, eta1, params);
        const cplx l2 = spectral::linear_rate(xi - xi1, eta - eta1, params);
        const cplx d = l1 + l2 - l;
        const cplx expect = (std::exp(t * (l1 + l2)) - std::exp(t * l)) / d;
        const cplx got = second_iterate_kernel(t, xi, xi1, resonance_chi(xi, xi1, eta, eta1)) *
                         std::polar(1.0, t * p(xi, eta));
        CHECK(std::abs(got - expect) <= 1e-10 * std::abs(expect));

        // integral representation: int_0^t e^{-t xi^2 + tau z} dtau
        const cplx z{2.0 * xi1 * (xi - xi1), -resonance_chi(xi, xi1, eta, eta1)};
        const GaussRule g = composite_gauss_legendre(0.0, t, 16, 8);
        cplx quad{};
        for (std::size_t q = 0; q < g.nodes.size(); ++q) quad += g.weights[q] * std::exp(-t * xi * xi + g.nodes[q] * z);
        const double integrand = t * std::exp(-t * xi * xi) * std::max(1.0, std::exp(t * z.real()));
        CHECK(std::abs(second_iterate_kernel(t, xi, xi1, -z.imag()) - quad) <= 1e-10 * integrand);
    }
}

TEST_CASE("phi_N: membership, symmetry, rectangle areas") {
    const CounterexampleSpec spec{32.0, -0.7, 0.05, 8};
    const PhiHat phi = build_phi_hat(spec);
    const double n = spec.N, amp = std::pow(n, -1.5 + 0.7);
    CHECK(phi(0.6 * n, 0.0) == doctest::Approx(amp));
    CHECK(phi(1.5 * n, (kSqrt3 + 0.5) * n * n) == doctest::Approx(amp));
    CHECK(phi(-1.5 * n, -(kSqrt3 + 0.5) * n * n) == doctest::Approx(amp));
    CHECK(phi(1.5 * n, -(kSqrt3 + 0.5) * n * n) == 0.0);
    CHECK(phi(0.8 * n, 0.0) == 0.0);
    CHECK(phi(0.6 * n, 7.0 * n * n) == 0.0);
    for (int i = 0; i < 200; ++i) {
        const double xi = testing::random_in(2 * i, -2.5, 2.5) * n;
        const double eta = testing::random_in(2 * i + 1, -8.0, 8.0) * n * n;
        CHECK(phi(xi, eta) == phi(-xi, -eta));
    }
    const FrequencyRectangles r = FrequencyRectangles::of(n);
    CHECK(r.a_pos.area() == doctest::Approx(3.0 * n * n * n));
    CHECK(r.b_pos.area() == doctest::Approx(n * n * n));
    CHECK(r.a_neg.area() == r.a_pos.area());

    CHECK_THROWS_AS(CounterexampleSpec({12.0}).validate(), DomainError);
    CHECK_THROWS_AS(CounterexampleSpec({4.0}).validate(), DomainError);
    CHECK(spec.t_N() == doctest::Approx(std::pow(32.0, -3.05)));
}

TEST_CASE("phi_N Sobolev norm is of order one") {
    // s = 0: |phi^|^2 integrates to N^{-3} (2 * 3N^3 + 2 * N^3) = 8
    CHECK(phi_sobolev_norm({64.0, 0.0, 0.05, 8}) == doctest::Approx(std::sqrt(8.0)).epsilon(1e-12));
    double lo = 1e300, hi = 0.0;
    for (double n : {16.0, 32.0, 64.0, 128.0, 256.0}) {
        const double v = phi_sobolev_norm({n, -0.7, 0.05, 8});
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    CHECK(hi / lo <= 4.0);
}

TEST_CASE("region_D: measure, emptiness, swap symmetry") {
    const CounterexampleSpec spec{64.0, -0.7, 0.05, 8};
    const double n = spec.N;
    const Rect w = output_window(n);
    for (int i = 0; i < 200; ++i) {
        const double xi = w.x0 + (w.x1 - w.x0) * testing::random_in(2 * i, 0.0, 1.0);
        const double eta = w.y0 + (w.y1 - w.y0) * testing::random_in(2 * i + 1, 0.0, 1.0);
        const ConvolutionRegion d = region_D(xi, eta, spec);
        CHECK(d.measure() == doctest::Approx(region_D_measure(xi, n)).epsilon(1e-12));
        if (xi >= 1.75 * n) CHECK(d.measure() >= 0.5 * n * n * n * (1.0 - 1e-12));
        // within the window only the A/B pairs are present
        CHECK(full_support(xi, eta, spec).measure() == doctest::Approx(d.measure()).epsilon(1e-12));

        for (const Rect& r : d.pieces) {
            const double x1 = 0.5 * (r.x0 + r.x1), y1 = 0.5 * (r.y0 + r.y1);
            bool found = false;
            for (const Rect& q : d.pieces) found = found || q.contains(xi - x1, eta - y1);
            CHECK(found);
        }
    }
    CHECK(region_D(3.0 * n, 0.0, spec).pieces.empty());
    CHECK(region_D(0.2 * n, 0.0, spec).pieces.empty());
    CHECK(region_D_measure(1.5 * n, n) == 0.0);
    CHECK(region_D_measure(1.6 * n, n) == doctest::Approx(2.0 * n * n * 0.1 * n));
}

TEST_CASE("second iterate quadrature: t = 0, amplitude scaling, self-convergence") {
    CounterexampleSpec spec{16.0, -0.7, 0.05, 8};
    const double t = spec.t_N();
    const WindowSamples zero = second_iterate_quadrature(spec, 0.0);
    for (const cplx& v : zero.value) CHECK(v == cplx{});

    const PhiHat a(spec);
    CounterexampleSpec other = spec;
    other.s = -0.2;
    const PhiHat b(other);
    const double ratio = b.amplitude() / a.amplitude();
    const double xi = 1.8 * spec.N, eta = 2.0 * spec.N * spec.N;
    const cplx va = second_iterate_at(a, t, xi, eta), vb = second_iterate_at(b, t, xi, eta);
    CHECK(std::abs(vb - ratio * ratio * va) <= 1e-10 * std::abs(vb));
    CHECK(std::abs(second_iterate_at(a, t, xi, eta, Support::Full) - va) <= 1e-12 * std::abs(va));

    const double coarse = windowed_sobolev_norm(second_iterate_quadrature(spec, t), spec.s);
    spec.resolution = 16;
    const double fine = windowed_sobolev_norm(second_iterate_quadrature(spec, t, Support::RegionD, 2), spec.s);
    CHECK(std::abs(coarse - fine) <= 0.01 * fine);
}

TEST_CASE("lattice mode against a brute-force pair sum") {
    const CounterexampleSpec spec{8.0, -0.7, 0.05, 8};
    const double t = spec.t_N();
    const double dxi = 1.0, deta = 32.0;
    const WindowSamples lat = second_iterate_lattice(spec, t, dxi, deta);
    REQUIRE(!lat.value.empty());
    const FrequencyRectangles r = FrequencyRectangles::of(spec.N);
    auto inside = [&](double x, double y) {
        for (const Rect& q : r.all())
            if (x >= q.x0 && x <= q.x1 && y >= q.y0 && y <= q.y1) return true;
        return false;
    };
    const double amp = spec.amplitude();
    for (std::size_t i = 0; i < lat.value.size(); i += 7) {
        const double xi = lat.xi[i], eta = lat.eta[i];
        cplx sum{};
        for (int j = -20; j <= 20; ++j)
            for (int k = -20; k <= 20; ++k) {
                const double x1 = j * dxi, y1 = k * deta;
                if (!inside(x1, y1) || !inside(xi - x1, eta - y1)) continue;
                const double chi = 3.0 * xi * x1 * (xi - x1) -
                                   std::pow(eta * x1 - y1 * xi, 2) / (xi * x1 * (xi - x1));
                const cplx z{2.0 * x1 * (xi - x1), -chi};
                sum += amp * amp * dxi * deta * std::exp(-t * xi * xi) * (std::exp(t * z) - 1.0) / z;
            }
        const cplx expect = cplx{0.0, -xi} * std::polar(1.0, t * p(xi, eta)) * sum;
        CHECK(std::abs(lat.value[i] - expect) <= 1e-10 * (std::abs(expect) + 1e-300));
    }
}

TEST_CASE("chi bound sampling and damping") {
    std::vector<double> ratios;
    for (double n : {32.0, 64.0, 128.0, 256.0}) {
        const ChiBoundReport rep = verify_chi_bound({n, -0.7, 0.05, 8}, 20000, 3);
        CHECK(std::isfinite(rep.max_chi_ratio));
        CHECK(rep.max_chi_ratio > 0.0);
        CHECK(rep.max_denominator_ratio >= rep.max_chi_ratio);
        CHECK(rep.min_damping >= 0.9);
        ratios.push_back(rep.max_chi_ratio);
    }
    CHECK(*std::max_element(ratios.begin(), ratios.end()) < 2.0 * *std::min_element(ratios.begin(), ratios.end()));
    for (double n : {32.0, 64.0, 128.0, 256.0})
        for (double eps : {0.01, 0.05, 0.1}) CHECK(std::exp(-n * n * std::pow(n, -3.0 - eps)) >= 0.9);
}

TEST_CASE("inflation scan: arguments, boundary exponent, report") {
    CHECK_THROWS_AS(inflation_scan(-0.7, 0.05, {16, 32, 64}), DomainError);
    CHECK_THROWS_AS(inflation_scan(-0.7, 0.05, {16, 64, 32, 128}), DomainError);
    const InflationReport rep = inflation_scan(-0.55, 0.05, {8, 16, 32, 64}, 6);
    CHECK(rep.theoretical == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(rep.rows.size() == 4);
    for (const auto& r : rep.rows) {
        CHECK(!r.flagged);
        CHECK(r.self_convergence <= 0.01);
        CHECK(r.log2N == doctest::Approx(std::log2(r.N)));
    }
    std::ostringstream out;
    write_inflation_report(out, rep);
    CHECK(out.str().rfind("N, t_N, hs_norm, log2N, log_norm\n8, ", 0) == 0);
    CHECK(out.str().find("# summary s=") != std::string::npos);
}
