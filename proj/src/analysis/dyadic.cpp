#include "kpb/analysis/dyadic.hpp"

#include <cmath>
#include <string>

#include "kpb/common/error.hpp"

namespace kpb::analysis {

double smooth_flank(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }

double smooth_step(double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double a = smooth_flank(x);
    return a / (a + smooth_flank(1.0 - x));
}

double cutoff_eta(double x) { return smooth_step(2.0 - std::abs(x)); }

double annulus_phi(double x) { return cutoff_eta(x) - cutoff_eta(2.0 * x); }

DyadicDecomposition::DyadicDecomposition(int j_max, int l_max) : j_max_(j_max), l_max_(l_max) {
    if (j_max < 0 || l_max < 0 || j_max > 60 || l_max > 60) {
        throw RangeError("DyadicDecomposition: level bounds must lie in [0, 60]");
    }
}

DyadicDecomposition DyadicDecomposition::covering(double xi_max, double sigma_max) {
    auto levels = [](double x) {
        int l = 0;
        while (std::ldexp(1.0, l) < x) ++l;
        return l;
    };
    return DyadicDecomposition(levels(xi_max), levels(sigma_max));
}

std::vector<double> DyadicDecomposition::n_levels() const {
    std::vector<double> v;
    for (int j = 0; j <= j_max_; ++j) v.push_back(std::ldexp(1.0, j));
    return v;
}

std::vector<double> DyadicDecomposition::l_levels() const {
    std::vector<double> v;
    for (int l = 0; l <= l_max_; ++l) v.push_back(std::ldexp(1.0, l));
    return v;
}

double DyadicDecomposition::block_weight(int level, double x) {
    if (level < 0) throw RangeError("block_weight: negative level");
    if (level == 0) return cutoff_eta(x);
    return annulus_phi(std::ldexp(x, -level));
}

double DyadicDecomposition::n_weight(double n, double xi) const { return block_weight(n_index(n), xi); }

double DyadicDecomposition::l_weight(double l, double sigma) const { return block_weight(l_index(l), sigma); }

std::size_t DyadicDecomposition::nonzero_blocks(double x, int max_level, std::array<LevelWeight, 2>& out) {
    const double a = std::abs(x);
    // Block 2^l (l >= 1) lives on 2^{l-1} < |x| < 2^{l+1}; block 1 on |x| < 2.
    int lo = 0;
    if (a >= 1.0) lo = static_cast<int>(std::floor(std::log2(a)));
    std::size_t count = 0;
    for (int l = lo; l <= lo + 1 && l <= max_level; ++l) {
        const double w = block_weight(l, a);
        if (w != 0.0) out[count++] = {l, w};
    }
    return count;
}

namespace {

int dyadic_index(double v, int max, const char* what) {
    int e = 0;
    const double m = std::frexp(v, &e);
    if (!(v > 0.0) || m != 0.5 || e - 1 < 0 || e - 1 > max) {
        throw RangeError(std::string(what) + ": not a dyadic level of this decomposition");
    }
    return e - 1;
}

}  // namespace

int DyadicDecomposition::n_index(double n) const { return dyadic_index(n, j_max_, "N"); }
int DyadicDecomposition::l_index(double l) const { return dyadic_index(l, l_max_, "L"); }

}  // namespace kpb::analysis
