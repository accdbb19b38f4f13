#include <doctest.h>

#include <cmath>
#include <sstream>

#include "kpb/evolution/etd.hpp"
#include "kpb/picard/picard.hpp"
#include "kpb/spectral/operators.hpp"

using namespace kpb;
using namespace kpb::picard;
using spectral::cplx;
using spectral::l2_norm;

namespace {

const SymbolParams kParams{};

PicardConfig small_config() {
    PicardConfig cfg;
    cfg.horizon = 0.25;
    cfg.storage_nodes = 32;
    cfg.tolerance = 1e-13;
    return cfg;
}

double sup_rel(const NodalTrajectory& a, const NodalTrajectory& b) {
    return sup_distance(a, b, 0.0) / sup_norm(b, 0.0);
}

}  // namespace

TEST_CASE("config validation") {
    PicardConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.quadrature_panels = 1;
    cfg.gauss_points = 7;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = PicardConfig{};
    cfg.horizon = 0.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("duhamel_map trivial cases") {
    const Grid2D g(32, 32);
    const PicardConfig cfg = small_config();
    const SpectralField2D phi = gaussian_bump(g, 0.1);
    NodalTrajectory zero = free_trajectory(SpectralField2D(g), cfg, kParams);

    const NodalTrajectory free = duhamel_map(zero, phi, cfg, kParams);
    const NodalTrajectory expect = free_trajectory(phi, cfg, kParams);
    CHECK(sup_distance(free, expect, 0.0) <= 1e-15 * sup_norm(expect, 0.0));

    const NodalTrajectory nothing = duhamel_map(zero, SpectralField2D(g), cfg, kParams);
    CHECK(sup_norm(nothing, 0.0) == 0.0);
}

TEST_CASE("duhamel_map is quadrature-converged at 64x64") {
    const Grid2D g(64, 64);
    PicardConfig cfg = small_config();
    const SpectralField2D phi = gaussian_bump(g, 0.2);
    const NodalTrajectory u = free_trajectory(phi, cfg, kParams);
    const NodalTrajectory coarse = duhamel_map(u, phi, cfg, kParams);
    cfg.quadrature_panels *= 2;
    const NodalTrajectory fine = duhamel_map(u, phi, cfg, kParams);
    CHECK(sup_rel(coarse, fine) <= 1e-8);
}

TEST_CASE("duhamel_map quadrature order is at least 2") {
    // One-point (midpoint) panels make the discretization error visible above round-off.
    const Grid2D g(32, 32);
    PicardConfig cfg = small_config();
    cfg.gauss_points = 1;
    cfg.quadrature_panels = 8;
    const SpectralField2D phi = gaussian_bump(g, 1.0);
    const NodalTrajectory u = free_trajectory(phi, cfg, kParams);
    std::vector<NodalTrajectory> out;
    for (std::size_t panels : {8u, 16u, 32u}) {
        cfg.quadrature_panels = panels;
        out.push_back(duhamel_map(u, phi, cfg, kParams));
    }
    const double d1 = sup_distance(out[0], out[1], 0.0);
    const double d2 = sup_distance(out[1], out[2], 0.0);
    CHECK(std::log2(d1 / d2) >= 2.0 - 0.05);
}

TEST_CASE("iterate_to_fixed_point with zero data converges at once") {
    const Grid2D g(16, 16);
    const IterateSequence seq = iterate_to_fixed_point(SpectralField2D(g), small_config(), kParams);
    CHECK(seq.status == PicardStatus::Converged);
    CHECK(seq.iterations() == 1);
    CHECK(sup_norm(seq.last(), 0.0) == 0.0);
}

TEST_CASE("small data: contraction, Duhamel residual, ETD cross-check") {
    const Grid2D g(64, 64);
    const PicardConfig cfg = small_config();
    const SpectralField2D phi = gaussian_bump(g, 0.2);
    const IterateSequence seq = iterate_to_fixed_point(phi, cfg, kParams, true);
    REQUIRE(seq.status == PicardStatus::Converged);
    for (std::size_t k = 3; k < seq.ratios.size(); ++k) CHECK(seq.ratios[k] < 0.5);

    // first iterate is the free evolution
    const NodalTrajectory free = free_trajectory(phi, cfg, kParams);
    CHECK(sup_distance(seq.iterates[1], free, 0.0) <= 1e-12 * sup_norm(free, 0.0));

    const NodalTrajectory again = duhamel_map(seq.last(), phi, cfg, kParams);
    CHECK(sup_distance(again, seq.last(), 0.0) <= 10.0 * cfg.tolerance * sup_norm(seq.last(), 0.0));

    evolution::SimulationState etd(phi, cfg.horizon / 400.0);
    evolution::simulate(etd, cfg.horizon, kParams);
    const SpectralField2D& picard_end = seq.last().fields.back();
    CHECK(spectral::l2_distance(picard_end, etd.field) <= 1e-6 * l2_norm(etd.field));

    // second Picard increment is half the second-order term
    const SpectralField2D incr = seq.iterates[2].fields.back() - seq.iterates[1].fields.back();
    const SpectralField2D u2 = second_iterate_grid(phi, cfg.horizon, kParams);
    CHECK(spectral::l2_distance(2.0 * incr, u2) <= 1e-8 * l2_norm(u2));

    std::ostringstream report;
    write_iterate_report(report, seq);
    CHECK(report.str().rfind("k, d_k, ratio, sup_hs_norm\n", 0) == 0);
    CHECK(report.str().find("# status converged") != std::string::npos);
}

TEST_CASE("large data: non-contraction, recovered by shrinking the horizon") {
    const Grid2D g(64, 64);
    PicardConfig cfg = small_config();
    cfg.tolerance = 1e-6;
    const SpectralField2D phi = gaussian_bump(g, 0.2 * 100.0);
    const auto trials = contraction_horizon_scan(phi, cfg, kParams, 4);
    REQUIRE(trials.size() >= 2);
    CHECK(trials.front().horizon == 0.25);
    CHECK(trials.front().status == PicardStatus::Diverged);
    CHECK(trials.back().status == PicardStatus::Converged);
    CHECK(trials.back().horizon < 0.25);
}

TEST_CASE("second_iterate_grid: t = 0 and the single-mode closed form") {
    const Grid2D g(32, 32);
    SpectralField2D phi(g);
    const cplx c{0.3, 0.1};
    phi.set_mode(2, 1, c);
    CHECK(second_iterate_grid(phi, 0.0, kParams).is_zero());

    const double t = 0.3;
    const SpectralField2D u2 = second_iterate_grid(phi, t, kParams, 8, 8);
    const cplx l0 = spectral::linear_rate(2.0, 1.0, kParams);
    const cplx l2 = spectral::linear_rate(4.0, 2.0, kParams);
    const cplx d = 2.0 * l0 - l2;
    const cplx expect = -cplx{0.0, 4.0} * c * c * std::exp(t * l2) * (std::exp(t * d) - 1.0) / d;
    CHECK(std::abs(u2.at(4, 2) - expect) <= 1e-12 * std::abs(expect));
    CHECK(std::abs(u2.at(-4, -2) - std::conj(expect)) <= 1e-12 * std::abs(expect));
    double rest = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) rest += std::abs(u2[i]);
    rest -= 2.0 * std::abs(expect);
    CHECK(std::abs(rest) <= 1e-12 * std::abs(expect));
}

TEST_CASE("second_iterate_grid is quadratic in the data") {
    const Grid2D g(32, 32);
    const SpectralField2D phi = gaussian_bump(g, 0.5);
    const SpectralField2D base = second_iterate_grid(phi, 0.2, kParams);
    for (double alpha : {-2.0, 0.5, 3.0}) {
        const SpectralField2D scaled = second_iterate_grid(alpha * phi, 0.2, kParams);
        CHECK(spectral::l2_distance(scaled, alpha * alpha * base) <= 1e-10 * alpha * alpha * l2_norm(base));
    }
}
