#include "kpb/evolution/etd.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <stdexcept>

#include "kpb/common/error.hpp"
#include "kpb/spectral/operators.hpp"

namespace kpb::evolution {

PhiFunctions phi_functions(cplx z) {
    if (std::abs(z) < 1.0) {
        // Terms decay like 1/(m+3)!, so 20 terms reach double precision on |z| < 1.
        cplx p1{}, p2{}, p3{};
        cplx zm{1.0, 0.0};
        double f1 = 1.0, f2 = 0.5, f3 = 1.0 / 6.0;
        for (int m = 0; m < 20; ++m) {
            p1 += zm * f1;
            p2 += zm * f2;
            p3 += zm * f3;
            zm *= z;
            f1 /= (m + 2);
            f2 /= (m + 3);
            f3 /= (m + 4);
        }
        return {p1, p2, p3};
    }
    const cplx ez = std::exp(z);
    const cplx p1 = (ez - 1.0) / z;
    const cplx p2 = (p1 - 1.0) / z;
    const cplx p3 = (p2 - 0.5) / z;
    return {p1, p2, p3};
}

void History::push(HistorySample s) {
    if (capacity_ == 0) return;
    if (samples_.size() == capacity_) samples_.pop_front();
    samples_.push_back(s);
}

SimulationState::SimulationState(SpectralField2D f, double h, bool keep_history)
    : field(std::move(f)), step_size(h) {
    if (!(h > 0.0) || !std::isfinite(h)) throw std::invalid_argument("SimulationState: step size must be positive");
    reference_l2 = spectral::l2_norm(field);
    if (keep_history) {
        history.emplace();
        history->push({time, reference_l2});
    }
}

EtdStepper::EtdStepper(const Grid2D& grid, double h, const SymbolParams& params, StepOptions options)
    : grid_(grid), h_(h), options_(options) {
    if (!(h > 0.0) || !std::isfinite(h)) throw std::invalid_argument("EtdStepper: step size must be positive");
    const std::size_t n = grid.size();
    e_.resize(n);
    e2_.resize(n);
    q_.resize(n);
    f1_.resize(n);
    f2_.resize(n);
    f3_.resize(n);
    for (std::size_t ix = 0; ix < grid.nx(); ++ix) {
        for (std::size_t iy = 0; iy < grid.ny(); ++iy) {
            const std::size_t i = ix * grid.ny() + iy;
            const cplx z = h * spectral::linear_rate(grid.xi(ix), grid.eta(iy), params);
            const PhiFunctions half = phi_functions(0.5 * z);
            const PhiFunctions full = phi_functions(z);
            e_[i] = std::exp(z);
            e2_[i] = std::exp(0.5 * z);
            q_[i] = 0.5 * h * half.phi1;
            f1_[i] = h * (full.phi1 - 3.0 * full.phi2 + 4.0 * full.phi3);
            f2_[i] = h * 2.0 * (full.phi2 - 2.0 * full.phi3);
            f3_[i] = h * (4.0 * full.phi3 - full.phi2);
        }
    }
}

SpectralField2D EtdStepper::nonlinear_term(const SpectralField2D& u) const {
    SpectralField2D out = spectral::x_derivative(spectral::dealiased_product(u, u));
    out *= -0.5;
    return out;
}

void EtdStepper::step(SimulationState& state) const {
    if (!(state.field.grid() == grid_)) throw GridMismatch("EtdStepper: state lives on a different grid");
    const std::size_t n = grid_.size();
    const SpectralField2D& u = state.field;
    std::vector<cplx> next(n);

    if (!options_.nonlinear) {
        for (std::size_t i = 0; i < n; ++i) next[i] = e_[i] * u[i];
    } else {
        const SpectralField2D nu = nonlinear_term(u);
        std::vector<cplx> buf(n);
        for (std::size_t i = 0; i < n; ++i) buf[i] = e2_[i] * u[i] + q_[i] * nu[i];
        const SpectralField2D a(grid_, buf);
        const SpectralField2D na = nonlinear_term(a);
        for (std::size_t i = 0; i < n; ++i) buf[i] = e2_[i] * u[i] + q_[i] * na[i];
        const SpectralField2D b(grid_, buf);
        const SpectralField2D nb = nonlinear_term(b);
        for (std::size_t i = 0; i < n; ++i) buf[i] = e2_[i] * a[i] + q_[i] * (2.0 * nb[i] - nu[i]);
        const SpectralField2D c(grid_, std::move(buf));
        const SpectralField2D nc = nonlinear_term(c);
        for (std::size_t i = 0; i < n; ++i) {
            next[i] = e_[i] * u[i] + f1_[i] * nu[i] + f2_[i] * (na[i] + nb[i]) + f3_[i] * nc[i];
        }
    }

    SpectralField2D advanced(grid_, std::move(next));
    const std::size_t index = state.step_index + 1;
    if (!advanced.all_finite()) throw BlowUpError(index, "ETD step produced non-finite coefficients");
    const double l2 = spectral::l2_norm(advanced);
    if (l2 > options_.growth_limit * std::max(state.reference_l2, 1e-300)) {
        throw BlowUpError(index, "ETD step exceeded the L2 growth limit");
    }
    state.field = std::move(advanced);
    state.time += h_;
    state.step_index = index;
    if (state.history) state.history->push({state.time, l2});
}

SimulationState step_etd(SimulationState state, const SymbolParams& params, StepOptions options) {
    EtdStepper(state.field.grid(), state.step_size, params, options).step(state);
    return state;
}

double default_step_size(const Grid2D& grid) {
    const double kmax = grid.dxi() * grid.dealias_cutoff_x();
    return 0.1 / std::max(1.0, kmax);
}

void simulate(SimulationState& state, double t_end, const SymbolParams& params, StepOptions options,
              const StepObserver& observer) {
    const double h = state.step_size;
    const EtdStepper stepper(state.field.grid(), h, params, options);
    const double t0 = state.time;
    const auto full_steps = static_cast<std::size_t>(std::floor((t_end - t0) / h * (1.0 + 1e-12)));
    for (std::size_t k = 0; k < full_steps; ++k) {
        stepper.step(state);
        if (observer) observer(state);
    }
    // Land exactly on t_end; accumulated rounding is absorbed here too.
    state.time = t0 + static_cast<double>(full_steps) * h;
    const double rest = t_end - state.time;
    if (rest > 1e-12 * h) {
        const EtdStepper last(state.field.grid(), rest, params, options);
        last.step(state);
        if (observer) observer(state);
    }
    state.time = t_end;
}

TrajectoryLog::TrajectoryLog(std::ostream& out, double s1, double s2, std::size_t cadence)
    : out_(out), s1_(s1), s2_(s2), cadence_(std::max<std::size_t>(cadence, 1)) {
    out_ << "t, l2_norm, hs_norm\n";
}

void TrajectoryLog::record(const SimulationState& state) {
    if (state.step_index % cadence_ != 0) return;
    out_ << std::setprecision(17) << state.time << ", " << spectral::l2_norm(state.field) << ", "
         << spectral::sobolev_norm(state.field, s1_, s2_) << '\n';
    out_.flush();
}

}  // namespace kpb::evolution
