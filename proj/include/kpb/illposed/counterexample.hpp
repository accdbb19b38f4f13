#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace kpb::illposed {

using cplx = std::complex<double>;

/// Parameters of the data phi_N. t_N = N^{-3-eps} is always derived.
struct CounterexampleSpec {
    double N = 16.0;
    double s = -0.7;
    double eps = 0.05;
    /// Gauss points per dimension on each quadrature piece.
    std::size_t resolution = 12;

    /// Throws DomainError unless N >= 8 is a power of two, eps > 0 and resolution >= 2.
    void validate() const;
    double t_N() const;
    /// Height N^{-3/2-s} of the indicator density.
    double amplitude() const;
};

/// Axis-aligned rectangle [x0, x1] x [y0, y1] in (xi, eta).
struct Rect {
    double x0, x1, y0, y1;

    double area() const;
    bool contains(double x, double y) const;
    bool empty() const { return !(x1 > x0) || !(y1 > y0); }
    Rect intersect(const Rect& o) const;
    /// {nu - p : p in this}.
    Rect reflect_about(double xi, double eta) const;
};

/// A_N = [N/2, 3N/4] x [-6N^2, 6N^2], B_N = [N, 2N] x [sqrt3 N^2, (sqrt3 + 1) N^2], each
/// with its point reflection (xi, eta) -> (-xi, -eta), which makes the datum real.
struct FrequencyRectangles {
    Rect a_pos, a_neg, b_pos, b_neg;

    static FrequencyRectangles of(double N);
    std::vector<Rect> a_pieces() const { return {a_pos, a_neg}; }
    std::vector<Rect> b_pieces() const { return {b_pos, b_neg}; }
    std::vector<Rect> all() const { return {a_pos, a_neg, b_pos, b_neg}; }
};

/// chi = 3 xi xi1 (xi - xi1) - (eta xi1 - eta1 xi)^2 / (xi xi1 (xi - xi1)).
/// Throws DomainError if xi, xi1 or xi - xi1 vanishes.
double resonance_chi(double xi, double xi1, double eta, double eta1);

/// Lambda = eta1 + (xi - xi1)(eta1 - sqrt3 xi xi1) / xi1; chi(xi, xi1, Lambda, eta1) = 0.
double resonance_lambda(double xi, double xi1, double eta1);

/// Time kernel of the second iterate for the pair (xi1, xi - xi1):
///   e^{-t xi^2} (e^{t z} - 1) / z,   z = 2 xi1 (xi - xi1) - i chi,
/// i.e. (e^{-t(xi1^2 + (xi-xi1)^2)} e^{-i t chi} - e^{-t xi^2}) / (2 xi1 (xi - xi1) - i chi).
/// For |z| < 1e-14 the limit t e^{-t xi^2} is returned.
cplx second_iterate_kernel(double t, double xi, double xi1, double chi);

/// Indicator density phi^_N: amplitude on the four rectangles, 0 elsewhere.
class PhiHat {
public:
    explicit PhiHat(const CounterexampleSpec& spec);

    double operator()(double xi, double eta) const;
    const CounterexampleSpec& spec() const { return spec_; }
    const FrequencyRectangles& rects() const { return rects_; }
    double amplitude() const { return amp_; }

private:
    CounterexampleSpec spec_;
    FrequencyRectangles rects_;
    double amp_;
};

PhiHat build_phi_hat(const CounterexampleSpec& spec);

/// (int <xi>^{2s} |phi^_N|^2 dxi deta)^{1/2}.
double phi_sobolev_norm(const CounterexampleSpec& spec);

/// Output window [3N/2, 2N] x [(sqrt3 - 5) N^2, (sqrt3 + 6) N^2].
Rect output_window(double N);

/// Pairs (xi1, eta1) with nu1 in one piece and nu - nu1 in another, for
/// nu = (xi, eta): one rectangle per nonempty pair of pieces.
struct ConvolutionRegion {
    std::vector<Rect> pieces;
    double measure() const;
};

/// D(xi, eta): pairs with one factor in an A piece and the other in a B piece.
ConvolutionRegion region_D(double xi, double eta, const CounterexampleSpec& spec);

/// All pairs of pieces (A/A, B/B and A/B).
ConvolutionRegion full_support(double xi, double eta, const CounterexampleSpec& spec);

/// mes D(xi, eta) for nu in the output window: 2 N^2 min(xi - 3N/2, N/4).
double region_D_measure(double xi, double N);

/// Sampled values of u_2^ on a tensor quadrature of the output window.
struct WindowSamples {
    std::vector<double> xi, eta, weight;
    std::vector<cplx> value;
};

enum class Support { RegionD, Full };

/// u_2^(xi, eta, t) = -i xi e^{i t P(xi, eta)} int phi^(nu1) phi^(nu - nu1) K_t dnu1 at one point.
cplx second_iterate_at(const PhiHat& phi, double t, double xi, double eta, Support support = Support::RegionD);

/// u_2^ on Gauss nodes of the output window: xi split at 7N/4, eta in 8 panels.
WindowSamples second_iterate_quadrature(const CounterexampleSpec& spec, double t,
                                        Support support = Support::RegionD, unsigned jobs = 1);

/// (sum w <xi>^{2s} |u_2^|^2)^{1/2}.
double windowed_sobolev_norm(const WindowSamples& samples, double s);

/// Lattice mode: u_2^ at lattice points (xi_j, eta_k) = (j dxi, k deta) of the output
/// window with the nu1 integral replaced by the lattice sum dxi deta sum_nu1 over
/// the full support. Matches a periodic-grid computation with spacings dxi, deta.
WindowSamples second_iterate_lattice(const CounterexampleSpec& spec, double t, double dxi, double deta);

struct ChiBoundReport {
    double N = 0.0;
    std::size_t samples = 0;
    double max_chi_ratio = 0.0;     // max |chi| / N^3 over D
    double max_denominator_ratio = 0.0;  // max |2 xi1 (xi - xi1) - i chi| / N^3
    double min_damping = 0.0;        // e^{-N^2 t_N}
};

/// Uniform samples of nu in the output window and nu1 in D(nu) (by measure).
ChiBoundReport verify_chi_bound(const CounterexampleSpec& spec, std::size_t samples, std::uint64_t seed);

struct InflationRow {
    double N = 0.0;
    double t_N = 0.0;
    double hs_norm = 0.0;
    double log2N = 0.0;
    double log_norm = 0.0;
    /// Relative change of hs_norm when the quadrature resolution doubles.
    double self_convergence = 0.0;
    bool flagged = false;
};

struct InflationReport {
    double s = 0.0;
    double eps = 0.0;
    std::vector<InflationRow> rows;
    double slope = 0.0;
    double theoretical = 0.0;
    /// Inflation expected (theoretical > 0): slope >= theoretical - margin. Otherwise slope <= margin/2.
    bool pass = false;
    double margin = 0.1;
    std::size_t excluded = 1;
};

/// ||u_{2,N}(t_N)||_{H^{s,0}} over the output window for each N; log-log slope fitted
/// over N_list without its first `exclude_smallest` entries.
InflationReport inflation_scan(double s, double eps, const std::vector<double>& N_list, std::size_t resolution = 12,
                               unsigned jobs = 1, std::size_t exclude_smallest = 1);

/// `N, t_N, hs_norm, log2N, log_norm` rows (17 digits), then a summary row.
void write_inflation_report(std::ostream& out, const InflationReport& report);

}  // namespace kpb::illposed
