#include "kpb/cli/app.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <sstream>
#include <stdexcept>

#include "experiments.hpp"
#include "kpb/common/error.hpp"

#ifndef KPB_VERSION
#define KPB_VERSION "0.0.0"
#endif

namespace kpb::cli {

namespace fs = std::filesystem;

std::string format_double(double x) {
    std::ostringstream out;
    out << std::setprecision(17) << x;
    return out.str();
}

fs::path default_output_root() {
    const char* env = std::getenv("KPB_OUTPUT_ROOT");
    return env != nullptr && *env != '\0' ? fs::path(env) : fs::path("kpb-output");
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> values;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        const auto b = item.find_first_not_of(" \t");
        const auto e = item.find_last_not_of(" \t");
        if (b == std::string::npos) throw std::invalid_argument("empty entry in list '" + text + "'");
        const std::string token = item.substr(b, e - b + 1);
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
        if (ec != std::errc{} || ptr != token.data() + token.size())
            throw std::invalid_argument("bad number '" + token + "' in list '" + text + "'");
        values.push_back(v);
    }
    if (values.empty()) throw std::invalid_argument("empty list");
    return values;
}

std::pair<std::size_t, std::size_t> parse_grid(const std::string& text) {
    const auto x = text.find('x');
    auto size = [&](const std::string& part) -> std::size_t {
        std::size_t v = 0;
        const auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
        if (ec != std::errc{} || ptr != part.data() + part.size() || part.empty() || v < 4)
            throw std::invalid_argument("grid must look like 128x128 with sizes >= 4, got '" + text + "'");
        return v;
    };
    if (x == std::string::npos) throw std::invalid_argument("grid must look like 128x128, got '" + text + "'");
    return {size(text.substr(0, x)), size(text.substr(x + 1))};
}

void check_writable(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw std::runtime_error("cannot create output directory " + dir.string());
    const fs::path probe = dir / ".kpb-probe";
    {
        std::ofstream f(probe);
        if (!(f << "probe")) throw std::runtime_error("output directory is not writable: " + dir.string());
    }
    fs::remove(probe, ec);
}

void write_artifacts(const fs::path& dir, const std::vector<Artifact>& artifacts) {
    std::vector<fs::path> staged;
    auto discard = [&] {
        std::error_code ec;
        for (const auto& p : staged) fs::remove(p, ec);
    };
    for (const auto& a : artifacts) {
        const fs::path tmp = dir / (a.name + ".tmp");
        staged.push_back(tmp);
        std::ofstream f(tmp, std::ios::binary);
        if (!f.write(a.content.data(), static_cast<std::streamsize>(a.content.size())) || !f.flush()) {
            discard();
            throw std::runtime_error("cannot write " + tmp.string());
        }
    }
    for (const auto& a : artifacts) fs::rename(dir / (a.name + ".tmp"), dir / a.name);
}

namespace {

/// Manifest entries of one section: option name and its resolved value.
using Section = std::vector<std::pair<std::string, std::function<std::string()>>>;

std::string render(double v) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}
std::string render(bool v) { return v ? "true" : "false"; }
std::string render(const std::string& v) { return '"' + v + '"'; }
template <class T>
    requires std::is_integral_v<T>
std::string render(T v) {
    return std::to_string(v);
}

template <class T>
void add_setting(CLI::App* app, Section& section, const std::string& name, T& var, const std::string& help) {
    app->add_option("--" + name, var, help)->capture_default_str();
    section.emplace_back(name, [&var] { return render(var); });
}

void bind_grid(CLI::App* app, Section& s, GridOptions& g) {
    add_setting(app, s, "grid", g.size, "Grid size NXxNY");
    add_setting(app, s, "lx", g.lx, "Box length in x");
    add_setting(app, s, "ly", g.ly, "Box length in y");
}

void bind_physics(CLI::App* app, Section& s, PhysicsOptions& p) {
    add_setting(app, s, "dissipation", p.dissipation, "Include the -u_xx term (on/off)");
    add_setting(app, s, "lambda", p.lambda, "Transverse dispersion sign (+1 or -1)");
}

void bind_data(CLI::App* app, Section& s, DataOptions& d) {
    add_setting(app, s, "init", d.init, "Initial datum: bump, random or file");
    add_setting(app, s, "input", d.input, "Field file for init=file (its grid replaces --grid)");
    add_setting(app, s, "peak", d.peak, "Max |u| of the datum");
    add_setting(app, s, "width", d.width, "Gaussian width for init=bump");
    add_setting(app, s, "modes-x", d.modes_x, "Largest |j| for init=random");
    add_setting(app, s, "modes-y", d.modes_y, "Largest |k| for init=random");
    add_setting(app, s, "decay", d.decay, "Spectral decay exponent for init=random");
    add_setting(app, s, "seed", d.seed, "Seed for init=random");
}

void bind_ensemble(CLI::App* app, Section& s, EnsembleOptions& e) {
    add_setting(app, s, "grid", e.grid, "Ensemble grid NXxNY (2 pi box)");
    add_setting(app, s, "modes-x", e.modes_x, "Largest |j| of ensemble members");
    add_setting(app, s, "modes-y", e.modes_y, "Largest |k| of ensemble members");
    add_setting(app, s, "decay", e.decay, "Spectral decay exponent");
    add_setting(app, s, "seed", e.seed, "Ensemble seed");
    add_setting(app, s, "samples", e.samples, "Number of samples");
}

bool config_has_keys(const std::string& path) {
    std::ifstream in(path);
    std::string line;
    while (std::getline(in, line)) {
        const auto b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        const char c = line[b];
        if (c != '#' && c != ';' && c != '[') return true;
    }
    return false;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"KPB-I numerical experiments", "kpb"};
    app.set_version_flag("--version", KPB_VERSION);
    app.set_config("--config", "", "INI config; command-line flags take precedence");
    app.allow_config_extras(CLI::config_extras_mode::error);
    app.require_subcommand(1);
    app.fallthrough();

    std::map<const CLI::App*, Section> sections;
    std::string out_dir;
    unsigned jobs = 1;
    Section& global = sections[&app];
    add_setting(&app, global, "out", out_dir, "Output directory (default: $KPB_OUTPUT_ROOT/<experiment>)");
    add_setting(&app, global, "jobs", jobs, "Worker threads for parallel scans");

    std::map<const CLI::App*, std::function<RunOutput()>> actions;
    auto add = [&](const std::string& name, const std::string& help) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->configurable();
        return sub;
    };

    SimulateOptions sim;
    {
        CLI::App* sub = add("simulate", "ETDRK4 trajectory with an L2 log");
        Section& s = sections[sub];
        bind_grid(sub, s, sim.grid);
        bind_data(sub, s, sim.data);
        bind_physics(sub, s, sim.physics);
        add_setting(sub, s, "T", sim.T, "Final time");
        add_setting(sub, s, "dt", sim.dt, "Step size (0 selects 0.1 / max |xi|)");
        add_setting(sub, s, "log-every", sim.log_every, "Log every k-th step");
        add_setting(sub, s, "s1", sim.s1, "x Sobolev index of the logged norm");
        add_setting(sub, s, "s2", sim.s2, "y Sobolev index of the logged norm");
        add_setting(sub, s, "growth-limit", sim.growth_limit, "Blow-up threshold as a multiple of the initial L2 norm");
        add_setting(sub, s, "blowup-is-failure", sim.blowup_is_failure, "Exit nonzero on blow-up");
        actions[sub] = [&] { return run_simulate(sim, jobs); };
    }
    PicardOptions pic;
    {
        CLI::App* sub = add("picard", "Picard iteration of the Duhamel map");
        Section& s = sections[sub];
        bind_grid(sub, s, pic.grid);
        bind_data(sub, s, pic.data);
        bind_physics(sub, s, pic.physics);
        add_setting(sub, s, "T", pic.T, "Time horizon");
        add_setting(sub, s, "nodes", pic.nodes, "Chebyshev-Lobatto storage nodes");
        add_setting(sub, s, "panels", pic.panels, "Gauss-Legendre panels per integral");
        add_setting(sub, s, "gauss", pic.gauss, "Gauss points per panel");
        add_setting(sub, s, "max-iter", pic.max_iter, "Iteration cap");
        add_setting(sub, s, "tol", pic.tol, "Relative stopping tolerance");
        add_setting(sub, s, "s", pic.s, "Sobolev index of the sup-in-time metric");
        add_setting(sub, s, "divergence-is-failure", pic.divergence_is_failure, "Exit nonzero on divergence");
        actions[sub] = [&] { return run_picard(pic, jobs); };
    }
    NormsOptions nrm;
    {
        CLI::App* sub = add("norms", "Sobolev, dyadic block and Bourgain norms of a datum");
        Section& s = sections[sub];
        bind_grid(sub, s, nrm.grid);
        bind_data(sub, s, nrm.data);
        bind_physics(sub, s, nrm.physics);
        add_setting(sub, s, "s1", nrm.s1, "x Sobolev index");
        add_setting(sub, s, "s2", nrm.s2, "y Sobolev index");
        add_setting(sub, s, "b", nrm.b, "Modulation index");
        add_setting(sub, s, "q", nrm.q, "Besov summation exponent (1 or 2)");
        add_setting(sub, s, "window", nrm.window, "Time window length");
        add_setting(sub, s, "nt", nrm.nt, "Time samples (power of two)");
        actions[sub] = [&] { return run_norms(nrm, jobs); };
    }
    VerifyLinearOptions vl;
    {
        CLI::App* sub = add("verify-linear", "Ratios for the localized free-wave estimate");
        Section& s = sections[sub];
        bind_ensemble(sub, s, vl.ensemble);
        bind_physics(sub, s, vl.physics);
        add_setting(sub, s, "s", vl.s, "Sobolev index");
        add_setting(sub, s, "window", vl.window, "Time window length");
        add_setting(sub, s, "nt", vl.nt, "Time samples (power of two)");
        actions[sub] = [&] { return run_verify_linear(vl, jobs); };
    }
    VerifyBilinearOptions vb;
    {
        CLI::App* sub = add("verify-bilinear", "Ratios for the bilinear estimate and a time scan");
        Section& s = sections[sub];
        bind_ensemble(sub, s, vb.ensemble);
        bind_physics(sub, s, vb.physics);
        add_setting(sub, s, "s", vb.s, "Sobolev index");
        add_setting(sub, s, "T", vb.T, "Time support half-width");
        add_setting(sub, s, "window", vb.window, "Time window length");
        add_setting(sub, s, "nt", vb.nt, "Time samples (power of two)");
        add_setting(sub, s, "scan", vb.scan, "Comma list of T for the time scan (empty: none)");
        actions[sub] = [&] { return run_verify_bilinear(vb, jobs); };
    }
    VerifyDyadicOptions vd;
    {
        CLI::App* sub = add("verify-dyadic", "Ratios for the dyadic convolution estimate");
        Section& s = sections[sub];
        bind_physics(sub, s, vd.physics);
        add_setting(sub, s, "trials", vd.trials, "Random (k, j) draws");
        add_setting(sub, s, "k-min", vd.k_min, "Smallest frequency level");
        add_setting(sub, s, "k-max", vd.k_max, "Largest frequency level");
        add_setting(sub, s, "j-min", vd.j_min, "Smallest modulation level");
        add_setting(sub, s, "j-max", vd.j_max, "Largest modulation level");
        add_setting(sub, s, "mu-extent", vd.mu_extent, "Cut |mu| <= M");
        add_setting(sub, s, "cells", vd.cells, "Profile lattice cells");
        add_setting(sub, s, "refinement", vd.refinement, "Quadrature panels per cell");
        add_setting(sub, s, "seed", vd.seed, "Seed");
        actions[sub] = [&] { return run_verify_dyadic(vd, jobs); };
    }
    InflateOptions inf;
    {
        CLI::App* sub = add("inflate", "Second-iterate norm inflation scan");
        Section& s = sections[sub];
        add_setting(sub, s, "s", inf.s, "Sobolev index");
        add_setting(sub, s, "eps", inf.eps, "Time exponent offset: t_N = N^{-3-eps}");
        add_setting(sub, s, "N", inf.N, "Comma list of N (powers of two, ascending)");
        add_setting(sub, s, "resolution", inf.resolution, "Gauss points per dimension and piece");
        add_setting(sub, s, "exclude", inf.exclude, "Smallest N values left out of the fit");
        actions[sub] = [&] { return run_inflate(inf, jobs); };
    }
    ChiBoundOptions chi;
    {
        CLI::App* sub = add("chi-bound", "Sampled |chi| / N^3 over the region D");
        Section& s = sections[sub];
        add_setting(sub, s, "s", chi.s, "Sobolev index");
        add_setting(sub, s, "eps", chi.eps, "Time exponent offset");
        add_setting(sub, s, "N", chi.N, "Comma list of N");
        add_setting(sub, s, "samples", chi.samples, "Samples per N");
        add_setting(sub, s, "seed", chi.seed, "Seed");
        actions[sub] = [&] { return run_chi_bound(chi, jobs); };
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return Invalid;
    }

    std::vector<CLI::App*> chosen = app.get_subcommands();
    std::sort(chosen.begin(), chosen.end());
    chosen.erase(std::unique(chosen.begin(), chosen.end()), chosen.end());
    if (chosen.size() != 1) {
        err << "error: exactly one experiment must be selected (config and command line disagree)\n";
        return Invalid;
    }
    const CLI::Option* config = app.get_config_ptr();
    if (config != nullptr && config->count() > 0 && !config_has_keys(config->as<std::string>())) {
        err << "error: config file " << config->as<std::string>() << " has no settings\n";
        return Invalid;
    }
    if (jobs == 0) {
        err << "error: --jobs must be >= 1\n";
        return Invalid;
    }
    CLI::App* sub = chosen.front();
    const fs::path dir = out_dir.empty() ? default_output_root() / sub->get_name() : fs::path(out_dir);

    const bool existed = fs::exists(dir);
    auto cleanup = [&] {
        std::error_code ec;
        if (!existed && fs::is_empty(dir, ec)) fs::remove(dir, ec);
    };
    try {
        check_writable(dir);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return Invalid;
    }

    RunOutput result;
    try {
        result = actions.at(sub)();
    } catch (const BlowUpError& e) {
        cleanup();
        err << "blow-up: " << e.what() << '\n';
        return BlowUp;
    } catch (const std::invalid_argument& e) {
        cleanup();
        err << "error: " << e.what() << '\n';
        return Invalid;
    } catch (const std::domain_error& e) {
        cleanup();
        err << "error: " << e.what() << '\n';
        return Invalid;
    } catch (const std::out_of_range& e) {
        cleanup();
        err << "error: " << e.what() << '\n';
        return Invalid;
    } catch (const std::exception& e) {
        cleanup();
        err << "failure: " << e.what() << '\n';
        return Failure;
    }
    if (result.status != Ok) {
        cleanup();
        err << sub->get_name() << ": " << result.summary << '\n';
        return result.status;
    }

    out_dir = dir.string();
    std::ostringstream manifest;
    manifest << "# kpb " << KPB_VERSION << "\n# rerun: kpb --config manifest.ini\n";
    for (const auto& [name, value] : sections[&app]) manifest << name << '=' << value() << '\n';
    manifest << '[' << sub->get_name() << "]\n";
    for (const auto& [name, value] : sections[sub]) manifest << name << '=' << value() << '\n';
    result.artifacts.push_back({"manifest.ini", manifest.str()});

    try {
        write_artifacts(dir, result.artifacts);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return Failure;
    }
    out << sub->get_name() << ": " << result.summary << " -> " << dir.string() << '\n';
    return Ok;
}

}  // namespace kpb::cli
