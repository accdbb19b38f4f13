#pragma once

#include <cstddef>
#include <deque>
#include <functional>
#include <optional>
#include <ostream>
#include <vector>

#include "kpb/evolution/semigroup.hpp"

namespace kpb::evolution {

/// phi_k(z) = sum_{m >= 0} z^m / (m + k)!, k = 1, 2, 3.
struct PhiFunctions {
    cplx phi1;
    cplx phi2;
    cplx phi3;
};

/// Evaluates phi_1..phi_3 with a Taylor branch for |z| < 1 and the closed
/// forms (e^z - 1)/z etc. elsewhere.
PhiFunctions phi_functions(cplx z);

struct HistorySample {
    double time;
    double l2;
};

/// Bounded ring of (time, L2) samples; the oldest sample is dropped when full.
class History {
public:
    explicit History(std::size_t capacity = 4096) : capacity_(capacity) {}
    void push(HistorySample s);
    const std::deque<HistorySample>& samples() const { return samples_; }
    std::size_t capacity() const { return capacity_; }

private:
    std::size_t capacity_;
    std::deque<HistorySample> samples_;
};

struct SimulationState {
    SpectralField2D field;
    double time = 0.0;
    double step_size = 0.0;
    std::size_t step_index = 0;
    /// L2 norm at the start of the run; the blow-up guard measures growth against it.
    double reference_l2 = 0.0;
    std::optional<History> history;

    SimulationState(SpectralField2D f, double h, bool keep_history = false);
};

struct StepOptions {
    /// Test hook: drop the nonlinear term so a step reduces to the exact semigroup.
    bool nonlinear = true;
    /// Abort when the L2 norm exceeds this multiple of reference_l2.
    double growth_limit = 1e6;
};

/// Fourth-order exponential time differencing (Cox-Matthews ETDRK4) for
///   u_t = L u + N(u),  L = i P - xi^2,  N(u) = -1/2 d/dx (u^2).
/// The coefficient arrays depend only on (grid, h, params) and are built once.
class EtdStepper {
public:
    EtdStepper(const Grid2D& grid, double h, const SymbolParams& params, StepOptions options = {});

    double step_size() const { return h_; }

    /// Advances one step in place. Throws BlowUpError on non-finite values or
    /// runaway growth; the error carries the index of the failing step.
    void step(SimulationState& state) const;

    /// -1/2 i xi (u^2)^ with two-thirds dealiasing.
    SpectralField2D nonlinear_term(const SpectralField2D& u) const;

private:
    Grid2D grid_;
    double h_;
    StepOptions options_;
    std::vector<cplx> e_, e2_, q_, f1_, f2_, f3_;
};

/// One ETDRK4 step with freshly built coefficients. Prefer EtdStepper in loops.
SimulationState step_etd(SimulationState state, const SymbolParams& params, StepOptions options = {});

/// h = 0.1 / max(1, max |xi|) over the dealiased band.
double default_step_size(const Grid2D& grid);

/// Called after every accepted step.
using StepObserver = std::function<void(const SimulationState&)>;

/// Integrates to t_end using the state's step size; the final step is shortened to land exactly.
void simulate(SimulationState& state, double t_end, const SymbolParams& params, StepOptions options = {},
              const StepObserver& observer = {});

/// Column text `t, l2_norm, hs_norm` with 17 significant digits.
class TrajectoryLog {
public:
    TrajectoryLog(std::ostream& out, double s1, double s2, std::size_t cadence = 1);
    void record(const SimulationState& state);

private:
    std::ostream& out_;
    double s1_, s2_;
    std::size_t cadence_;
};

}  // namespace kpb::evolution
