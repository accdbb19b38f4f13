#include "kpb/common/numeric.hpp"

#include <numbers>
#include <stdexcept>

namespace kpb {

namespace {

template <class T>
T pairwise_sum_impl(std::span<const T> v) {
    constexpr std::size_t kBlock = 16;
    if (v.size() <= kBlock) {
        T acc{};
        for (const T& x : v) acc += x;
        return acc;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_sum_impl(v.first(half)) + pairwise_sum_impl(v.subspan(half));
}

}  // namespace

double pairwise_sum(std::span<const double> values) { return pairwise_sum_impl(values); }
cplx pairwise_sum(std::span<const cplx> values) { return pairwise_sum_impl(values); }

LinearFit least_squares_line(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw std::invalid_argument("least_squares_line: need at least two (x, y) pairs");
    }
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("least_squares_line: degenerate abscissae");
    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (fit.intercept + fit.slope * x[i]);
        ss += r * r;
    }
    fit.residual_rms = std::sqrt(ss / n);
    return fit;
}

GaussRule gauss_legendre(std::size_t points) {
    if (points == 0) throw std::invalid_argument("gauss_legendre: zero points");
    GaussRule rule;
    rule.nodes.resize(points);
    rule.weights.resize(points);
    const std::size_t m = (points + 1) / 2;
    const double n = static_cast<double>(points);
    for (std::size_t i = 0; i < m; ++i) {
        // Newton iteration on P_n from the Tricomi initial guess.
        double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (std::size_t k = 1; k <= points; ++k) {
                const double p2 = p1;
                p1 = p0;
                const double kk = static_cast<double>(k);
                p0 = ((2.0 * kk - 1.0) * z * p1 - (kk - 1.0) * p2) / kk;
            }
            dp = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        const double w = 2.0 / ((1.0 - z * z) * dp * dp);
        rule.nodes[i] = -z;
        rule.nodes[points - 1 - i] = z;
        rule.weights[i] = w;
        rule.weights[points - 1 - i] = w;
    }
    return rule;
}

GaussRule composite_gauss_legendre(double a, double b, std::size_t panels,
                                   std::size_t points_per_panel) {
    if (panels == 0) throw std::invalid_argument("composite_gauss_legendre: zero panels");
    const GaussRule base = gauss_legendre(points_per_panel);
    GaussRule rule;
    rule.nodes.reserve(panels * points_per_panel);
    rule.weights.reserve(panels * points_per_panel);
    const double h = (b - a) / static_cast<double>(panels);
    for (std::size_t p = 0; p < panels; ++p) {
        const double lo = a + h * static_cast<double>(p);
        for (std::size_t i = 0; i < points_per_panel; ++i) {
            rule.nodes.push_back(lo + 0.5 * h * (base.nodes[i] + 1.0));
            rule.weights.push_back(0.5 * h * base.weights[i]);
        }
    }
    return rule;
}

std::vector<double> chebyshev_lobatto(double a, double b, std::size_t count) {
    if (count < 2) throw std::invalid_argument("chebyshev_lobatto: need at least two points");
    std::vector<double> t(count);
    const double n = static_cast<double>(count - 1);
    for (std::size_t i = 0; i < count; ++i) {
        const double x = -std::cos(std::numbers::pi * static_cast<double>(i) / n);
        t[i] = a + 0.5 * (b - a) * (x + 1.0);
    }
    t.front() = a;
    t.back() = b;
    return t;
}

std::vector<double> barycentric_coefficients(std::span<const double> nodes, double x) {
    const std::size_t n = nodes.size();
    std::vector<double> c(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        if (x == nodes[i]) {
            c[i] = 1.0;
            return c;
        }
    }
    // Chebyshev-Lobatto barycentric weights: (-1)^i, halved at the ends.
    double denom = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double w = (i % 2 == 0) ? 1.0 : -1.0;
        if (i == 0 || i == n - 1) w *= 0.5;
        c[i] = w / (x - nodes[i]);
        denom += c[i];
    }
    for (double& v : c) v /= denom;
    return c;
}

}  // namespace kpb
