#pragma once

#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "kpb/cli/app.hpp"
#include "kpb/spectral/field.hpp"
#include "kpb/spectral/symbol.hpp"

namespace kpb::cli {

struct GridOptions {
    std::string size = "64x64";
    double lx = 2.0 * std::numbers::pi;
    double ly = 2.0 * std::numbers::pi;

    spectral::Grid2D make() const;
};

struct PhysicsOptions {
    bool dissipation = true;
    int lambda = 1;

    spectral::SymbolParams params() const;
};

/// Initial datum: a Gaussian bump, seeded random modes, or a field file.
struct DataOptions {
    std::string init = "bump";
    std::string input;
    double peak = 0.2;
    double width = 1.0;
    int modes_x = 4;
    int modes_y = 4;
    double decay = 2.0;
    std::uint64_t seed = 1;

    spectral::SpectralField2D make(const spectral::Grid2D& grid) const;
};

struct RunOutput {
    std::vector<Artifact> artifacts;
    std::string summary;
    int status = Ok;
};

struct SimulateOptions {
    GridOptions grid{"128x128"};
    DataOptions data;
    PhysicsOptions physics;
    double T = 1.0;
    double dt = 0.0;
    std::size_t log_every = 1;
    double s1 = 0.0;
    double s2 = 0.0;
    double growth_limit = 1e6;
    bool blowup_is_failure = true;
};

struct PicardOptions {
    GridOptions grid;
    DataOptions data;
    PhysicsOptions physics;
    double T = 0.25;
    std::size_t nodes = 32;
    std::size_t panels = 4;
    std::size_t gauss = 8;
    std::size_t max_iter = 40;
    double tol = 1e-12;
    double s = 0.0;
    bool divergence_is_failure = false;
};

struct NormsOptions {
    GridOptions grid{"32x32"};
    DataOptions data;
    PhysicsOptions physics;
    double s1 = 0.0;
    double s2 = 0.0;
    double b = 0.5;
    int q = 1;
    double window = 8.0;
    std::size_t nt = 256;
};

struct EnsembleOptions {
    std::string grid = "16x16";
    int modes_x = 3;
    int modes_y = 2;
    double decay = 1.0;
    std::uint64_t seed = 1;
    std::size_t samples = 100;
};

struct VerifyLinearOptions {
    EnsembleOptions ensemble;
    PhysicsOptions physics;
    double s = 0.0;
    double window = 8.0;
    std::size_t nt = 256;
};

struct VerifyBilinearOptions {
    EnsembleOptions ensemble{"20x20"};
    PhysicsOptions physics;
    double s = 0.0;
    double T = 1.0;
    double window = 8.0;
    std::size_t nt = 512;
    std::string scan = "1,0.5,0.25";
};

struct VerifyDyadicOptions {
    PhysicsOptions physics;
    std::size_t trials = 100;
    int k_min = 0, k_max = 2;
    int j_min = 0, j_max = 2;
    double mu_extent = 4.0;
    std::size_t cells = 3;
    std::size_t refinement = 2;
    std::uint64_t seed = 1;
};

struct InflateOptions {
    double s = -0.7;
    double eps = 0.05;
    std::string N = "16,32,64,128";
    std::size_t resolution = 12;
    std::size_t exclude = 1;
};

struct ChiBoundOptions {
    double s = -0.7;
    double eps = 0.05;
    std::string N = "32,64,128,256";
    std::size_t samples = 100000;
    std::uint64_t seed = 1;
};

RunOutput run_simulate(const SimulateOptions& o, unsigned jobs);
RunOutput run_picard(const PicardOptions& o, unsigned jobs);
RunOutput run_norms(const NormsOptions& o, unsigned jobs);
RunOutput run_verify_linear(const VerifyLinearOptions& o, unsigned jobs);
RunOutput run_verify_bilinear(const VerifyBilinearOptions& o, unsigned jobs);
RunOutput run_verify_dyadic(const VerifyDyadicOptions& o, unsigned jobs);
RunOutput run_inflate(const InflateOptions& o, unsigned jobs);
RunOutput run_chi_bound(const ChiBoundOptions& o, unsigned jobs);

}  // namespace kpb::cli
