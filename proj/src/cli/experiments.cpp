#include "experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "kpb/analysis/verify.hpp"
#include "kpb/common/error.hpp"
#include "kpb/evolution/etd.hpp"
#include "kpb/illposed/counterexample.hpp"
#include "kpb/picard/picard.hpp"
#include "kpb/spectral/field_io.hpp"
#include "kpb/spectral/operators.hpp"

namespace kpb::cli {

using spectral::Grid2D;
using spectral::SpectralField2D;

namespace {

Artifact field_artifact(const std::string& name, const SpectralField2D& f) {
    std::ostringstream out(std::ios::binary);
    spectral::write_field(out, f);
    return {name, out.str()};
}

std::string join_summary(const std::vector<std::pair<std::string, std::string>>& kv) {
    std::string s;
    for (const auto& [k, v] : kv) s += (s.empty() ? "" : " ") + k + "=" + v;
    return s;
}

analysis::EnsembleSpec ensemble_spec(const EnsembleOptions& o) {
    const auto [nx, ny] = parse_grid(o.grid);
    analysis::EnsembleSpec e;
    e.grid = Grid2D(nx, ny);
    e.max_mode_x = o.modes_x;
    e.max_mode_y = o.modes_y;
    e.decay = o.decay;
    e.seed = o.seed;
    e.samples = o.samples;
    if (o.samples == 0) throw std::invalid_argument("samples must be positive");
    if (o.modes_x < 1 || o.modes_y < 0) throw std::invalid_argument("modes_x must be >= 1 and modes_y >= 0");
    return e;
}

std::string ratio_table(const analysis::RatioReport& r) {
    std::ostringstream out;
    analysis::write_ratio_report(out, r);
    return out.str();
}

}  // namespace

Grid2D GridOptions::make() const {
    const auto [nx, ny] = parse_grid(size);
    if (!(lx > 0.0) || !(ly > 0.0)) throw std::invalid_argument("box lengths must be positive");
    return Grid2D(nx, ny, lx, ly);
}

spectral::SymbolParams PhysicsOptions::params() const {
    if (lambda != 1 && lambda != -1) throw std::invalid_argument("lambda must be +1 or -1");
    spectral::SymbolParams p;
    p.sign = lambda == 1 ? spectral::DispersionSign::Positive : spectral::DispersionSign::Negative;
    p.dissipation = dissipation;
    return p;
}

SpectralField2D DataOptions::make(const Grid2D& grid) const {
    if (init == "file") {
        if (input.empty()) throw std::invalid_argument("init=file needs --input");
        return spectral::load_field(input);
    }
    if (!(peak >= 0.0)) throw std::invalid_argument("peak must be >= 0");
    if (init == "bump") return picard::gaussian_bump(grid, peak, width);
    if (init == "random") {
        analysis::EnsembleSpec e;
        e.grid = grid;
        e.max_mode_x = modes_x;
        e.max_mode_y = modes_y;
        e.decay = decay;
        e.seed = seed;
        SpectralField2D f = analysis::ensemble_member(e, 0);
        const std::vector<double> u = f.to_physical();
        double m = 0.0;
        for (double v : u) m = std::max(m, std::abs(v));
        if (m > 0.0) f *= peak / m;
        return f;
    }
    throw std::invalid_argument("init must be bump, random or file");
}

RunOutput run_simulate(const SimulateOptions& o, unsigned) {
    const spectral::SymbolParams params = o.physics.params();
    if (!(o.T >= 0.0)) throw std::invalid_argument("T must be >= 0");
    if (o.dt < 0.0) throw std::invalid_argument("dt must be >= 0 (0 selects the default)");
    const SpectralField2D phi = o.data.make(o.grid.make());
    const double h = o.dt > 0.0 ? o.dt : evolution::default_step_size(phi.grid());

    evolution::SimulationState state(phi, h);
    std::ostringstream log;
    evolution::TrajectoryLog trajectory(log, o.s1, o.s2, o.log_every);
    trajectory.record(state);

    const double l2_initial = spectral::l2_norm(phi);
    double previous = l2_initial, max_increase = 0.0;
    evolution::StepOptions step_options;
    step_options.growth_limit = o.growth_limit;
    std::string blowup;
    try {
        evolution::simulate(state, o.T, params, step_options, [&](const evolution::SimulationState& s) {
            trajectory.record(s);
            const double l2 = spectral::l2_norm(s.field);
            max_increase = std::max(max_increase, (l2 - previous) / std::max(previous, 1e-300));
            previous = l2;
        });
    } catch (const BlowUpError& e) {
        if (o.blowup_is_failure) throw;
        blowup = e.what();
    }
    const std::size_t cadence = std::max<std::size_t>(o.log_every, 1);
    if (state.step_index % cadence != 0 && blowup.empty()) {
        log << format_double(state.time) << ", " << format_double(spectral::l2_norm(state.field)) << ", "
            << format_double(spectral::sobolev_norm(state.field, o.s1, o.s2)) << '\n';
    }

    RunOutput r;
    r.summary = join_summary({{"steps", std::to_string(state.step_index)},
                              {"t", format_double(state.time)},
                              {"step_size", format_double(h)},
                              {"l2_initial", format_double(l2_initial)},
                              {"l2_final", format_double(spectral::l2_norm(state.field))},
                              {"max_step_increase", format_double(max_increase)}});
    log << "# summary " << r.summary << '\n';
    if (!blowup.empty()) log << "# blowup " << blowup << '\n';
    r.artifacts.push_back({"trajectory.csv", log.str()});
    if (blowup.empty()) r.artifacts.push_back(field_artifact("final_field.kpbf", state.field));
    return r;
}

RunOutput run_picard(const PicardOptions& o, unsigned jobs) {
    picard::PicardConfig cfg;
    cfg.horizon = o.T;
    cfg.storage_nodes = o.nodes;
    cfg.quadrature_panels = o.panels;
    cfg.gauss_points = o.gauss;
    cfg.max_iterations = o.max_iter;
    cfg.tolerance = o.tol;
    cfg.norm_s = o.s;
    cfg.jobs = jobs;
    cfg.validate();
    const spectral::SymbolParams params = o.physics.params();
    const SpectralField2D phi = o.data.make(o.grid.make());

    const picard::IterateSequence seq = picard::iterate_to_fixed_point(phi, cfg, params);
    RunOutput r;
    r.summary = join_summary({{"status", picard::to_string(seq.status)},
                              {"iterations", std::to_string(seq.iterations())},
                              {"final_difference", format_double(seq.differences.back())}});
    if (seq.status == picard::PicardStatus::Diverged && o.divergence_is_failure) {
        r.status = BlowUp;
        return r;
    }
    std::ostringstream table;
    picard::write_iterate_report(table, seq);
    table << "# summary " << r.summary << '\n';
    if (!seq.note.empty()) table << "# note " << seq.note << '\n';
    r.artifacts.push_back({"iterates.csv", table.str()});
    r.artifacts.push_back(field_artifact("fixed_point.kpbf", seq.last().fields.back()));
    return r;
}

RunOutput run_norms(const NormsOptions& o, unsigned) {
    const spectral::SymbolParams params = o.physics.params();
    const analysis::NormSpec spec{o.b, o.s1, o.s2, static_cast<double>(o.q)};
    spec.validate();
    const SpectralField2D phi = o.data.make(o.grid.make());
    const Grid2D& g = phi.grid();

    const analysis::SpaceTimeField u = analysis::localized_free_wave(phi, o.window, o.nt, 2.0, params);
    const analysis::DyadicDecomposition decomp = analysis::covering_decomposition(u, params);

    std::ostringstream norms;
    norms << "quantity, value\n";
    norms << "l2, " << format_double(spectral::l2_norm(phi)) << '\n';
    norms << "hs, " << format_double(spectral::sobolev_norm(phi, o.s1, o.s2)) << '\n';
    norms << "bourgain, " << format_double(analysis::bourgain_norm(u, spec, decomp, params)) << '\n';
    norms << "weighted_integral, " << format_double(analysis::weighted_integral_norm(u, spec, params)) << '\n';
    norms << "uncovered_fraction, " << format_double(analysis::uncovered_fraction(u, decomp, params)) << '\n';

    const double xi_max = g.dxi() * static_cast<double>(g.nx() / 2);
    const analysis::DyadicDecomposition blocks = analysis::DyadicDecomposition::covering(xi_max, 1.0);
    std::ostringstream table;
    table << "N, hs_norm\n";
    for (double n : blocks.n_levels())
        table << format_double(n) << ", "
              << format_double(spectral::sobolev_norm(analysis::project_PN(phi, n, blocks), o.s1, o.s2)) << '\n';

    RunOutput r;
    r.summary = "hs=" + format_double(spectral::sobolev_norm(phi, o.s1, o.s2));
    r.artifacts.push_back({"norms.csv", norms.str()});
    r.artifacts.push_back({"blocks.csv", table.str()});
    return r;
}

RunOutput run_verify_linear(const VerifyLinearOptions& o, unsigned jobs) {
    analysis::FreeTermConfig cfg;
    cfg.s = o.s;
    cfg.window_length = o.window;
    cfg.nt = o.nt;
    cfg.jobs = jobs;
    const analysis::RatioReport rep =
        analysis::verify_free_term_estimate(ensemble_spec(o.ensemble), cfg, o.physics.params());
    RunOutput r;
    r.summary = "max_ratio=" + format_double(rep.max_ratio());
    r.artifacts.push_back({"free_term.csv", ratio_table(rep)});
    return r;
}

RunOutput run_verify_bilinear(const VerifyBilinearOptions& o, unsigned jobs) {
    analysis::BilinearConfig cfg;
    cfg.s = o.s;
    cfg.T = o.T;
    cfg.window_length = o.window;
    cfg.nt = o.nt;
    cfg.jobs = jobs;
    const analysis::EnsembleSpec ens = ensemble_spec(o.ensemble);
    const std::vector<double> Ts = o.scan.empty() ? std::vector<double>{} : parse_list(o.scan);
    if (Ts.size() == 1) throw std::invalid_argument("scan needs at least two values of T");
    const spectral::SymbolParams params = o.physics.params();

    const analysis::RatioReport rep = analysis::verify_bilinear_estimate(ens, cfg, params);
    RunOutput r;
    r.summary = "max_ratio=" + format_double(rep.max_ratio());
    r.artifacts.push_back({"bilinear.csv", ratio_table(rep)});
    if (!Ts.empty()) {
        const analysis::TimeScan scan = analysis::bilinear_time_scan(ens, cfg, Ts, params);
        std::ostringstream table;
        table << "T, max_ratio\n";
        for (std::size_t i = 0; i < scan.T.size(); ++i)
            table << format_double(scan.T[i]) << ", " << format_double(scan.max_ratio[i]) << '\n';
        table << "# summary exponent=" << format_double(scan.exponent) << '\n';
        r.summary += " exponent=" + format_double(scan.exponent);
        r.artifacts.push_back({"time_scan.csv", table.str()});
    }
    return r;
}

RunOutput run_verify_dyadic(const VerifyDyadicOptions& o, unsigned jobs) {
    analysis::DyadicConvolutionConfig cfg;
    cfg.trials = o.trials;
    cfg.k_min = o.k_min;
    cfg.k_max = o.k_max;
    cfg.j_min = o.j_min;
    cfg.j_max = o.j_max;
    cfg.mu_extent = o.mu_extent;
    cfg.profile_cells = o.cells;
    cfg.refinement = o.refinement;
    cfg.seed = o.seed;
    cfg.jobs = jobs;
    const analysis::RatioReport rep = analysis::verify_dyadic_convolution(cfg, o.physics.params());
    RunOutput r;
    r.summary = "max_ratio=" + format_double(rep.max_ratio());
    r.artifacts.push_back({"dyadic.csv", ratio_table(rep)});
    return r;
}

RunOutput run_inflate(const InflateOptions& o, unsigned jobs) {
    const illposed::InflationReport rep =
        illposed::inflation_scan(o.s, o.eps, parse_list(o.N), o.resolution, jobs, o.exclude);
    std::ostringstream table;
    illposed::write_inflation_report(table, rep);
    RunOutput r;
    r.summary = join_summary({{"slope", format_double(rep.slope)},
                              {"theoretical", format_double(rep.theoretical)},
                              {"result", rep.pass ? "pass" : "fail"}});
    r.artifacts.push_back({"inflation.csv", table.str()});
    return r;
}

RunOutput run_chi_bound(const ChiBoundOptions& o, unsigned) {
    const std::vector<double> Ns = parse_list(o.N);
    if (Ns.empty()) throw std::invalid_argument("N list is empty");
    if (o.samples == 0) throw std::invalid_argument("samples must be positive");
    std::vector<illposed::CounterexampleSpec> specs;
    for (double n : Ns) {
        illposed::CounterexampleSpec spec{n, o.s, o.eps};
        spec.validate();
        specs.push_back(spec);
    }
    std::ostringstream table;
    table << "N, samples, max_chi_ratio, max_denominator_ratio, min_damping\n";
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (const auto& spec : specs) {
        const illposed::ChiBoundReport rep = illposed::verify_chi_bound(spec, o.samples, o.seed);
        table << format_double(rep.N) << ", " << rep.samples << ", " << format_double(rep.max_chi_ratio) << ", "
              << format_double(rep.max_denominator_ratio) << ", " << format_double(rep.min_damping) << '\n';
        lo = std::min(lo, rep.max_chi_ratio);
        hi = std::max(hi, rep.max_chi_ratio);
    }
    RunOutput r;
    r.summary = "spread=" + format_double(hi / lo);
    table << "# summary " << r.summary << '\n';
    r.artifacts.push_back({"chi_bound.csv", table.str()});
    return r;
}

}  // namespace kpb::cli
