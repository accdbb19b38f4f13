#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace kpb::analysis {

/// e^{-1/x} for x > 0, else 0. The C-infinity building block of every cutoff below.
double smooth_flank(double x);

/// Smooth step: 0 for x <= 0, 1 for x >= 1, C-infinity in between.
double smooth_step(double x);

/// Cutoff eta: 1 on [-1, 1], 0 outside (-2, 2), eta(x) = step(2 - |x|) in between.
double cutoff_eta(double x);

/// Annular bump phi(x) = eta(x) - eta(2x), supported in 1/2 < |x| < 2.
double annulus_phi(double x);

/// One nonzero weight of a dyadic partition: level index l (block 2^l) and value.
struct LevelWeight {
    int level;
    double weight;
};

/// Littlewood-Paley decomposition in xi (blocks N = 2^j, 0 <= j <= j_max) and in
/// the modulation sigma = tau - P (blocks L = 2^l, 0 <= l <= l_max).
///
/// Block 1 is the low-frequency block eta(x); block 2^k >= 2 is phi(x / 2^k). The
/// blocks sum to eta(x / 2^max), i.e. to exactly 1 for |x| <= 2^max.
class DyadicDecomposition {
public:
    DyadicDecomposition(int j_max, int l_max);

    /// Smallest decomposition whose partitions cover |xi| <= xi_max and |sigma| <= sigma_max.
    static DyadicDecomposition covering(double xi_max, double sigma_max);

    int j_max() const { return j_max_; }
    int l_max() const { return l_max_; }
    std::vector<double> n_levels() const;
    std::vector<double> l_levels() const;

    /// Weight of block `level` at x. Throws RangeError if level is outside [0, max].
    static double block_weight(int level, double x);
    double n_weight(double n, double xi) const;
    double l_weight(double l, double sigma) const;

    /// The (at most two) blocks with nonzero weight at x, restricted to [0, max_level].
    static std::size_t nonzero_blocks(double x, int max_level, std::array<LevelWeight, 2>& out);

    /// Level index of a dyadic value 2^level; throws RangeError if not a power of two in range.
    int n_index(double n) const;
    int l_index(double l) const;

private:
    int j_max_;
    int l_max_;
};

}  // namespace kpb::analysis
