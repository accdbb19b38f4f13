#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "kpb/analysis/verify.hpp"
#include "kpb/common/error.hpp"
#include "kpb/common/numeric.hpp"
#include "kpb/evolution/semigroup.hpp"
#include "support/generators.hpp"

using namespace kpb;
using namespace kpb::analysis;

namespace {

const SymbolParams kParams{};
constexpr double kPi = std::numbers::pi;

SpaceTimeField random_spacetime(const Grid2D& g, double tw, std::size_t nt, std::uint64_t seed) {
    return SpaceTimeField::from_function(
        g, tw, nt,
        [&](double t) {
            return evolution::apply_evolution(testing::random_smooth_field(g, seed, 2.0), t - 0.5 * tw, kParams);
        },
        Windowing::Apply);
}

double st_distance(const SpaceTimeField& a, const SpaceTimeField& b) {
    SpaceTimeField d = b;
    d *= -1.0;
    d += a;
    return d.l2_norm();
}

}  // namespace

TEST_CASE("cutoff profile values and support") {
    CHECK(cutoff_eta(0.0) == 1.0);
    CHECK(cutoff_eta(1.0) == 1.0);
    CHECK(cutoff_eta(-1.0) == 1.0);
    CHECK(cutoff_eta(2.0) == 0.0);
    CHECK(cutoff_eta(5.0) == 0.0);
    CHECK(cutoff_eta(1.5) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(annulus_phi(0.5) == 0.0);
    CHECK(annulus_phi(2.0) == 0.0);
    CHECK(annulus_phi(1.0) == 1.0);
    for (int i = 0; i < 200; ++i) {
        const double x = testing::random_in(100 + i, -3.0, 3.0);
        CHECK(cutoff_eta(x) >= 0.0);
        CHECK(cutoff_eta(x) <= 1.0);
        CHECK(annulus_phi(x) >= 0.0);
    }
}

TEST_CASE("dyadic partition of unity on the covered range") {
    const DyadicDecomposition d(7, 9);
    for (int i = 0; i < 500; ++i) {
        const double x = testing::random_in(i, -128.0, 128.0);
        double sum = 0.0;
        for (int l = 0; l <= d.j_max(); ++l) sum += DyadicDecomposition::block_weight(l, x);
        CHECK(std::abs(sum - 1.0) <= 1e-10);

        std::array<LevelWeight, 2> w{};
        const std::size_t c = DyadicDecomposition::nonzero_blocks(x, d.j_max(), w);
        double listed = 0.0;
        for (std::size_t k = 0; k < c; ++k) {
            listed += w[k].weight;
            CHECK(w[k].weight == DyadicDecomposition::block_weight(w[k].level, x));
        }
        CHECK(std::abs(listed - 1.0) <= 1e-10);
    }
}

TEST_CASE("dyadic levels out of range are rejected") {
    const DyadicDecomposition d(4, 4);
    CHECK(d.n_index(16.0) == 4);
    CHECK(d.l_index(1.0) == 0);
    CHECK_THROWS_AS(d.n_index(32.0), RangeError);
    CHECK_THROWS_AS(d.n_index(3.0), RangeError);
    CHECK_THROWS_AS(d.l_index(0.5), RangeError);
    CHECK_THROWS_AS(DyadicDecomposition::block_weight(-1, 0.0), RangeError);
    CHECK_THROWS_AS(DyadicDecomposition(-1, 2), RangeError);
    CHECK(DyadicDecomposition::covering(9.0, 100.0).j_max() == 4);
    CHECK(DyadicDecomposition::covering(9.0, 100.0).l_max() == 7);
}

TEST_CASE("project_PN: support, partition and orthogonality") {
    const Grid2D g(64, 16);
    const DyadicDecomposition d(5, 0);
    const SpectralField2D u = testing::random_rough_field(g, 3);

    SpectralField2D sum(g);
    for (double n : d.n_levels()) sum += project_PN(u, n, d);
    CHECK(spectral::l2_distance(sum, u) <= 1e-10 * spectral::l2_norm(u));

    // energy of P_N u lives in N/2 < |xi| < 2N
    const SpectralField2D p8 = project_PN(u, 8.0, d);
    for (std::size_t ix = 0; ix < g.nx(); ++ix) {
        const double a = std::abs(g.xi(ix));
        if (a > 4.0 && a < 16.0) continue;
        for (std::size_t iy = 0; iy < g.ny(); ++iy) CHECK(p8[ix * g.ny() + iy] == spectral::cplx{});
    }
    // a mode at |xi| = N is untouched
    SpectralField2D m(g);
    m.set_mode(8, 3, {0.5, -0.25});
    CHECK(spectral::l2_distance(project_PN(m, 8.0, d), m) == 0.0);

    for (double n : d.n_levels())
        for (double mm : d.n_levels()) {
            if (mm < 4.0 * n && n < 4.0 * mm) continue;
            CHECK(project_PN(project_PN(u, n, d), mm, d).is_zero());
        }
    CHECK_THROWS_AS(project_PN(u, 64.0, d), RangeError);
}

TEST_CASE("time window and space-time transform") {
    CHECK(time_window(0.0, 8.0) == 0.0);
    CHECK(time_window(2.0, 8.0) == 1.0);
    CHECK(time_window(4.0, 8.0) == 1.0);
    CHECK(time_window(6.0, 8.0) == 1.0);
    CHECK(time_window(1.0, 8.0) == doctest::Approx(0.5).epsilon(1e-15));

    const Grid2D g(16, 16);
    CHECK_THROWS_AS(SpaceTimeField(g, 1.0, 24), DomainError);
    CHECK_THROWS_AS(SpaceTimeField(g, 1.0, 8), DomainError);
    CHECK_THROWS_AS(SpaceTimeField(g, 0.0, 16), DomainError);

    std::vector<SpectralField2D> samples;
    const std::size_t nt = 32;
    double riemann = 0.0;
    for (std::size_t k = 0; k < nt; ++k) {
        samples.push_back(testing::random_smooth_field(g, 40 + k, 2.0));
        const double e = spectral::l2_norm(samples.back());
        riemann += e * e * 2.0 / static_cast<double>(nt);
    }
    const SpaceTimeField u = SpaceTimeField::from_samples(samples, 2.0, Windowing::Preapplied);
    CHECK(u.l2_norm() == doctest::Approx(std::sqrt(riemann)).epsilon(1e-12));
    const auto back = u.to_samples();
    for (std::size_t k = 0; k < nt; ++k) {
        CHECK(spectral::l2_distance(back[k], samples[k]) <= 1e-12 * spectral::l2_norm(samples[k]));
    }

    // the window multiplies each sample exactly once
    const SpaceTimeField w = SpaceTimeField::from_samples(samples, 2.0, Windowing::Apply);
    const auto wb = w.to_samples();
    const double t5 = SpaceTimeField::sample_time(2.0, nt, 5);
    const SpectralField2D expect = time_window(t5, 2.0) * samples[5];
    CHECK(spectral::l2_distance(wb[5], expect) <= 1e-12 * spectral::l2_norm(samples[5]));
}

TEST_CASE("project_QL: partition, commutation with P_N") {
    const Grid2D g(16, 16);
    const SpaceTimeField u = random_spacetime(g, 4.0, 64, 5);
    const DyadicDecomposition d = covering_decomposition(u, kParams);
    CHECK(uncovered_fraction(u, d, kParams) == 0.0);

    SpaceTimeField sum(g, 4.0, 64);
    for (double l : d.l_levels()) sum += project_QL(u, l, d, kParams);
    CHECK(st_distance(sum, u) <= 1e-10 * u.l2_norm());

    const SpaceTimeField a = project_QL(project_PN(u, 4.0, d), 8.0, d, kParams);
    const SpaceTimeField b = project_PN(project_QL(u, 8.0, d, kParams), 4.0, d);
    CHECK(st_distance(a, b) <= 1e-12 * u.l2_norm());
    CHECK_THROWS_AS(project_QL(u, std::ldexp(1.0, d.l_max() + 1), d, kParams), RangeError);
}

TEST_CASE("free wave concentrates in Q_1 for a long window") {
    // u(t) = e^{i t P} on the mode (2, 1) and its conjugate partner
    const Grid2D g(8, 8);
    const double tw = 64.0;
    const std::size_t nt = 256;
    const double p = spectral::evaluate_symbol(2.0, 1.0, kParams);
    SpectralField2D base(g);
    base.set_mode(2, 1, {1.0, 0.0});
    const SpaceTimeField u = SpaceTimeField::from_function(
        g, tw, nt,
        [&](double t) {
            SpectralField2D f(g);
            f.set_mode(2, 1, std::polar(1.0, t * p));
            return f;
        },
        Windowing::Apply);
    const DyadicDecomposition d = covering_decomposition(u, kParams);
    double leaked = 0.0;
    for (double l : d.l_levels()) {
        if (l < 2.0) continue;
        const double e = project_QL(u, l, d, kParams).l2_norm();
        leaked += e * e;
    }
    CHECK(leaked <= 0.05 * u.l2_norm() * u.l2_norm());
}

TEST_CASE("bourgain_norm: zero, unit bin, q ordering, monotonicity") {
    const Grid2D g(16, 16);
    const DyadicDecomposition d(4, 8);
    CHECK(bourgain_norm(SpaceTimeField(g, 1.0, 16), NormSpec{}, d, kParams) == 0.0);
    CHECK_THROWS_AS(bourgain_norm(SpaceTimeField(g, 1.0, 16), NormSpec{0.5, 0.0, 0.0, 3.0}, d, kParams),
                    DomainError);

    // xi = 4 sits where phi_4 = 1; tau = 72 puts sigma = 72 - 64 = 8 where the L = 8 block is 1.
    const double tw = 2.0 * kPi;
    const std::size_t nt = 256;
    SpaceTimeField u = SpaceTimeField::from_function(
        g, tw, nt,
        [&](double t) {
            SpectralField2D f(g);
            f.set_mode(4, 0, std::polar(1.0, 72.0 * t));
            return f;
        },
        Windowing::Preapplied);
    u *= 1.0 / u.l2_norm();
    for (double b : {0.5, -0.5, 0.3})
        for (double s : {0.0, -0.7, 1.0}) {
            const double expect = std::pow(bracket(8.0 + 16.0), b) * std::pow(bracket(4.0), s);
            for (double q : {1.0, 2.0}) {
                CHECK(bourgain_norm(u, NormSpec{b, s, 0.0, q}, d, kParams) == doctest::Approx(expect).epsilon(1e-12));
            }
        }

    const SpaceTimeField r = random_spacetime(g, 4.0, 64, 9);
    const DyadicDecomposition dr = covering_decomposition(r, kParams);
    for (double b : {-0.5, 0.5})
        for (double s : {-0.5, 0.0, 0.5}) {
            const double n1 = bourgain_norm(r, NormSpec{b, s, 0.0, 1.0}, dr, kParams);
            const double n2 = bourgain_norm(r, NormSpec{b, s, 0.0, 2.0}, dr, kParams);
            CHECK(n2 <= n1 * (1.0 + 1e-14));
            CHECK(bourgain_norm(r, NormSpec{b, s + 0.25, 0.0, 1.0}, dr, kParams) >= n1);
            CHECK(bourgain_norm(r, NormSpec{b + 0.25, s, 0.0, 1.0}, dr, kParams) >= n1);
            CHECK(bourgain_norm(r, NormSpec{b, s, 0.5, 1.0}, dr, kParams) >= n1);
        }
}

TEST_CASE("q = 2 Besov form against the weighted integral") {
    // Content at |xi| = 4, 8 with |sigma| < 1 keeps every node in a single (N, L) bin,
    // so the two forms differ only by <L + N^2> against <i sigma + xi^2>.
    const Grid2D g(32, 8);
    const double tw = 64.0;
    const std::size_t nt = 2048;
    const SpaceTimeField u = SpaceTimeField::from_function(
        g, tw, nt,
        [&](double t) {
            SpectralField2D f(g);
            f.set_mode(4, 1, std::polar(1.0, t * spectral::evaluate_symbol(4.0, 1.0, kParams)));
            f.set_mode(8, -1, std::polar(0.5, t * spectral::evaluate_symbol(8.0, -1.0, kParams)));
            return f;
        },
        Windowing::Apply);
    const DyadicDecomposition d = covering_decomposition(u, kParams);
    for (double s : {0.0, 0.5}) {
        const NormSpec spec{0.5, s, 0.0, 2.0};
        const double besov = bourgain_norm(u, spec, d, kParams);
        const double integral = weighted_integral_norm(u, spec, kParams);
        CHECK(std::abs(besov * besov / (integral * integral) - 1.0) <= 0.10);
    }
}

TEST_CASE("modulation_overlap against a direct count") {
    for (int c = 0; c < 20; ++c) {
        const double a1 = testing::random_in(10 * c, 0.2, 3.0);
        const double a2 = testing::random_in(10 * c + 1, 0.2, 3.0);
        const double a3 = testing::random_in(10 * c + 2, 0.2, 3.0);
        const double omega = testing::random_in(10 * c + 3, -6.0, 6.0);
        const int n = 800;
        double count = 0.0;
        for (int i = 0; i < n; ++i) {
            const double a = -a1 + (i + 0.5) * 2.0 * a1 / n;
            for (int k = 0; k < n; ++k) {
                const double b = -a2 + (k + 0.5) * 2.0 * a2 / n;
                if (std::abs(a + b + omega) <= a3) count += 1.0;
            }
        }
        const double direct = count * 4.0 * a1 * a2 / (double(n) * n);
        CHECK(std::abs(modulation_overlap(omega, a1, a2, a3) - direct) <= 0.01 * 4.0 * a1 * a2);
    }
    CHECK(modulation_overlap(0.0, 1.0, 1.0, 10.0) == doctest::Approx(4.0));
    CHECK(modulation_overlap(100.0, 1.0, 1.0, 1.0) == 0.0);
}

TEST_CASE("band profiles and the trilinear integral") {
    const BandProfile ind = BandProfile::indicator(2, 1.5, 3);
    CHECK(ind(3.0, 0.0) == 1.0);
    CHECK(ind(-2.5, 1.4) == 1.0);
    CHECK(ind(1.9, 0.0) == 0.0);
    CHECK(ind(3.0, 1.6) == 0.0);
    CHECK(ind.square_integral() == doctest::Approx(2.0 * 2.0 * 3.0));

    const BandProfile r = BandProfile::random(1, 2.0, 3, 7, 0, 0);
    double mid = 0.0;
    const int n = 600;
    for (double sign : {1.0, -1.0})
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < n; ++k) {
                const double g = r(sign * (1.0 + (i + 0.5) / n), -2.0 + 4.0 * (k + 0.5) / n);
                mid += g * g * 4.0 / (double(n) * n);
            }
    CHECK(r.square_integral() == doctest::Approx(mid).epsilon(1e-4));

    // zero profile, and quadrature against a box midpoint rule over the bounding region
    const int j[3] = {0, 1, 0};
    BandProfile z = BandProfile::random(1, 1.0, 2, 3, 0, 1);
    z *= 0.0;
    const BandProfile g1 = BandProfile::random(1, 1.0, 2, 3, 0, 0);
    const BandProfile g3 = BandProfile::random(1, 1.0, 2, 3, 0, 2);
    CHECK(trilinear_dyadic_integral(g1, z, g3, j, 2, kParams) == 0.0);

    const double fast = trilinear_dyadic_integral(g1, g1, g3, j, 8, kParams);
    const int m = 48;
    double box = 0.0;
    const double hx = 4.0 / m, hm = 2.0 / m;
    for (int a = 0; a < m; ++a) {
        const double xi = -2.0 + (a + 0.5) * hx;
        for (int b = 0; b < m; ++b) {
            const double mu = -1.0 + (b + 0.5) * hm;
            const double f3 = g3(xi, mu);
            if (f3 == 0.0) continue;
            for (int c = 0; c < m; ++c) {
                const double xi1 = -2.0 + (c + 0.5) * hx;
                for (int e = 0; e < m; ++e) {
                    const double mu1 = -1.0 + (e + 0.5) * hm;
                    const double f = g1(xi1, mu1) * g1(xi - xi1, mu - mu1);
                    if (f == 0.0) continue;
                    const double omega = spectral::evaluate_symbol(xi1, mu1, kParams) +
                                         spectral::evaluate_symbol(xi - xi1, mu - mu1, kParams) -
                                         spectral::evaluate_symbol(xi, mu, kParams);
                    box += f * f3 * modulation_overlap(omega, 1.0, 2.0, 1.0) * hx * hm * hx * hm;
                }
            }
        }
    }
    CHECK(fast == doctest::Approx(box).epsilon(0.03));
}

TEST_CASE("verifiers: scale covariance and report format") {
    EnsembleSpec e;
    e.samples = 4;
    FreeTermConfig fc;
    fc.nt = 128;
    BilinearConfig bc;
    bc.nt = 256;
    DyadicConvolutionConfig dc;
    dc.trials = 4;

    const RatioReport f1 = verify_free_term_estimate(e, fc, kParams);
    const RatioReport b1 = verify_bilinear_estimate(e, bc, kParams);
    const RatioReport d1 = verify_dyadic_convolution(dc, kParams);
    e.amplitude = 3.5;
    dc.amplitude = 0.25;
    const RatioReport f2 = verify_free_term_estimate(e, fc, kParams);
    const RatioReport b2 = verify_bilinear_estimate(e, bc, kParams);
    const RatioReport d2 = verify_dyadic_convolution(dc, kParams);
    for (const auto& [a, b] : {std::pair{&f1, &f2}, std::pair{&b1, &b2}, std::pair{&d1, &d2}}) {
        REQUIRE(a->rows.size() == b->rows.size());
        REQUIRE(!a->rows.empty());
        for (std::size_t i = 0; i < a->rows.size(); ++i) {
            CHECK(std::abs(a->rows[i].ratio - b->rows[i].ratio) <= 1e-10 * a->rows[i].ratio);
            CHECK(std::isfinite(a->rows[i].ratio));
            CHECK(a->rows[i].ratio > 0.0);
        }
    }
    // indicator baselines: k = (1,1,1) has a null support and is skipped, k = (1,1,2) is recorded
    CHECK(d1.rows.back().params.back() == 1.0);
    CHECK(d1.rows.back().params[2] == 2.0);
    CHECK(d1.rows.back().ratio <= d1.max_ratio());
    CHECK(d1.notes.back() == "trial 4 skipped: empty support region");
    // random draws with incompatible frequency levels are redrawn
    CHECK(d1.rows.size() == dc.trials + 1);
    CHECK(d1.notes.size() == 1);

    std::ostringstream out;
    write_ratio_report(out, b1);
    const std::string text = out.str();
    CHECK(text.rfind("sample_id, s, T, window_length, nt, lhs, rhs, ratio\n", 0) == 0);
    CHECK(text.find("# summary bilinear samples=4 max_ratio=") != std::string::npos);

    std::ostringstream again;
    write_ratio_report(again, verify_bilinear_estimate(EnsembleSpec{.samples = 4}, bc, kParams));
    CHECK(again.str() == text);
}

TEST_CASE("bilinear estimate on dyadic blocks N1 = N2 = 4") {
    // data supported at |xi| = 4 only
    EnsembleSpec e;
    e.grid = Grid2D(32, 16, 2.0 * kPi, 2.0 * kPi);
    e.samples = 1;
    const SpectralField2D phi = [&] {
        SpectralField2D f(e.grid);
        f.set_mode(4, 1, {1.0, 0.5});
        f.set_mode(4, -2, {-0.3, 0.2});
        return f;
    }();
    const double tw = 8.0;
    const SpaceTimeField u = localized_free_wave(phi, tw, 1024, 1.0, kParams);
    const SpaceTimeField w = x_derivative_of_product(u, u);
    const DyadicDecomposition d = covering_decomposition(w, kParams);
    const double lhs = bourgain_norm(w, NormSpec{-0.5, 0.0, 0.0, 1.0}, d, kParams);
    const double rhs = std::pow(bourgain_norm(u, NormSpec{0.5, 0.0, 0.0, 1.0}, d, kParams), 2);
    CHECK(std::isfinite(lhs / rhs));
    CHECK(lhs > 0.0);
    MESSAGE("N1 = N2 = 4 block ratio: " << lhs / rhs);
}
