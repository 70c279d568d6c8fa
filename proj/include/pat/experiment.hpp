#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "pat/medium.hpp"
#include "pat/operators.hpp"
#include "pat/sensors.hpp"
#include "pat/solvers.hpp"

namespace pat {

/// End-to-end experiment description. Loadable from a flat key=value file;
/// every key can also be overridden from the command line.
struct ExperimentConfig {
    int n_omega{101};
    int oversize{2};
    double T{2.5};
    int nt{251};
    std::vector<PrimitiveSpec> phantom;
    CoefficientSpec medium_c;
    CoefficientSpec medium_a;
    SensorView sensors{SensorView::full()};
    std::string method{"cg"};
    double lambda{std::numeric_limits<double>::quiet_NaN()};  // required by h1/tv
    int max_iters{40};
    double noise_rel{0.0};
    uint64_t noise_seed{1};
    std::string stop{"max_iters"};  // or "discrepancy:TAU"
    std::string outdir{"out"};
    bool fine_data{true};  // simulate data on a twice finer grid, then restrict

    double h_t() const { return T / (nt - 1); }
};

/// The documented default phantom (two disks and a smooth bump) and medium
/// (speed 1 + 0.2 bump at (0.3,0) radius 0.4; damping 0.5 bump at (-0.2,0.1)
/// radius 0.5) used throughout the bundled experiments.
std::vector<PrimitiveSpec> default_phantom();
CoefficientSpec default_speed();
CoefficientSpec default_damping();
ExperimentConfig default_config();

ExperimentConfig load_config(const std::string& path);
void apply_config_override(ExperimentConfig& cfg, const std::string& key, const std::string& value);
void validate_config(const ExperimentConfig& cfg);

/// Builds the reconstruction-grid operator described by the config.
PatOperator build_operator(const ExperimentConfig& cfg);

/// Simulates sensor data for the config's phantom. With fine = true the
/// simulation runs at twice the spatial and temporal resolution and the trace
/// is brought back by keeping every second time sample and averaging the two
/// fine boundary pixels that make up each coarse sensor; this keeps the data
/// mesh distinct from the reconstruction mesh.
Sinogram simulate_data(const ExperimentConfig& cfg, bool fine);

/// Restriction of a twice-finer sinogram to the coarse sensor/time grid.
Sinogram restrict_sinogram(const Sinogram& fine, int coarse_count, int coarse_nt);

struct ExperimentResult {
    ScalarField reconstruction;
    ScalarField truth;
    IterationLog log;
    double final_rel_error{0.0};
    double final_rel_residual{0.0};
    double noise_delta_y{0.0};  // data-space-norm noise level (0 without noise)
};

/// Full pipeline: simulate data, optionally add noise, reconstruct with the
/// configured method, write all artifacts into cfg.outdir and report final
/// metrics.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

struct AdjointTestReport {
    std::vector<double> mismatches;
    double max_mismatch{0.0};
};

/// Monte-Carlo check of <W f, g>_Y = <f, W* g>_X with random smooth sources
/// and random data; reports the relative mismatch per trial.
AdjointTestReport adjoint_test(const PatOperator& op, int trials, uint64_t seed = 2024);

}  // namespace pat
