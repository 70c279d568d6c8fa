// Command-line front end: phantom/medium generation, data simulation, noise
// injection, reconstruction, adjoint verification and metrics.

#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pat/experiment.hpp"
#include "pat/io.hpp"
#include "pat/metrics.hpp"
#include "pat/noise.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitNumerical = 2;

// Every config key is exposed as a string-valued flag and funneled through
// the same override path the config file uses, so both agree on syntax.
struct ConfigCli {
    std::optional<std::string> config_path;
    std::vector<std::pair<std::string, std::optional<std::string>>> overrides;

    void add_common(CLI::App* cmd) {
        overrides.reserve(16);  // slots must not reallocate behind the callbacks
        cmd->add_option("--config", config_path, "flat key=value config file");
        add_key(cmd, "--n-omega", "n_omega", "samples per side of [-1,1]^2 (odd)");
        add_key(cmd, "--oversize", "oversize", "computational domain oversize factor");
        add_key(cmd, "--T", "T", "final measurement time");
        add_key(cmd, "--nt", "nt", "time samples including t=0");
        add_key(cmd, "--phantom", "phantom", "phantom primitives, e.g. 'disk:0,0,0.2,1; bump:...'");
        add_key(cmd, "--medium-c", "medium_c", "sound speed spec 'const:1; bump:...'");
        add_key(cmd, "--medium-a", "medium_a", "damping spec 'const:0; bump:...'");
        add_key(cmd, "--sensors", "sensors", "'full' or 'half_plane:THRESHOLD'");
        add_key(cmd, "--method", "method", "landweber | sd | cg | h1 | tv");
        add_key(cmd, "--lambda", "lambda", "regularization weight (h1/tv)");
        add_key(cmd, "--max-iters", "max_iters", "iteration budget");
        add_key(cmd, "--noise-rel", "noise_rel", "relative data noise to inject");
        add_key(cmd, "--noise-seed", "noise_seed", "noise RNG seed");
        add_key(cmd, "--stop", "stop", "'max_iters' or 'discrepancy:TAU'");
        add_key(cmd, "--outdir", "outdir", "output directory");
        add_key(cmd, "--data-grid", "data_grid", "'fine' (default) or 'same'");
    }

    pat::ExperimentConfig resolve() const {
        pat::ExperimentConfig cfg =
            config_path ? pat::load_config(*config_path) : pat::default_config();
        for (const auto& [key, value] : overrides) {
            if (value) pat::apply_config_override(cfg, key, *value);
        }
        return cfg;
    }

  private:
    void add_key(CLI::App* cmd, const std::string& flag, const std::string& key, const std::string& desc) {
        overrides.emplace_back(key, std::nullopt);
        auto* slot = &overrides.back().second;
        cmd->add_option_function<std::string>(
            flag, [slot](const std::string& v) { *slot = v; }, desc);
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"photoacoustic wave simulation and reconstruction toolkit"};
    app.require_subcommand(1);

    auto* cmd_phantom = app.add_subcommand("phantom", "sample the phantom onto the image grid");
    ConfigCli phantom_cfg;
    phantom_cfg.add_common(cmd_phantom);
    std::string phantom_out = "phantom.patf";
    std::string phantom_pgm;
    std::string phantom_csv;
    cmd_phantom->add_option("--out", phantom_out, "output .patf path");
    cmd_phantom->add_option("--pgm", phantom_pgm, "also write an 8-bit preview");
    cmd_phantom->add_option("--csv", phantom_csv, "also write CSV (small grids)");

    auto* cmd_medium = app.add_subcommand("medium", "sample speed and damping onto the computational grid");
    ConfigCli medium_cfg;
    medium_cfg.add_common(cmd_medium);
    std::string medium_out_c = "medium_c.patf";
    std::string medium_out_a = "medium_a.patf";
    std::string medium_pgm_c;
    std::string medium_pgm_a;
    cmd_medium->add_option("--out-c", medium_out_c, "sound speed output path");
    cmd_medium->add_option("--out-a", medium_out_a, "damping output path");
    cmd_medium->add_option("--pgm-c", medium_pgm_c, "speed preview");
    cmd_medium->add_option("--pgm-a", medium_pgm_a, "damping preview");

    auto* cmd_simulate = app.add_subcommand("simulate", "simulate boundary data for the configured phantom");
    ConfigCli simulate_cfg;
    simulate_cfg.add_common(cmd_simulate);
    std::string simulate_out = "data.pats";
    std::string simulate_pgm;
    cmd_simulate->add_option("--out", simulate_out, "output .pats path");
    cmd_simulate->add_option("--pgm", simulate_pgm, "sinogram preview");

    auto* cmd_noise = app.add_subcommand("noise", "add Gaussian noise of a prescribed relative level");
    std::string noise_in;
    std::string noise_out;
    double noise_rel = 0.0;
    uint64_t noise_seed = 1;
    cmd_noise->add_option("--in", noise_in, "input .pats")->required();
    cmd_noise->add_option("--out", noise_out, "output .pats")->required();
    cmd_noise->add_option("--rel", noise_rel, "target relative l2 error")->required();
    cmd_noise->add_option("--seed", noise_seed, "RNG seed");

    auto* cmd_reconstruct = app.add_subcommand("reconstruct", "run the full experiment pipeline");
    ConfigCli reconstruct_cfg;
    reconstruct_cfg.add_common(cmd_reconstruct);

    auto* cmd_adjoint = app.add_subcommand("adjoint-test", "verify the forward/adjoint inner-product identity");
    ConfigCli adjoint_cfg;
    adjoint_cfg.add_common(cmd_adjoint);
    int adjoint_trials = 10;
    uint64_t adjoint_seed = 2024;
    double adjoint_tol = 1e-2;
    cmd_adjoint->add_option("--trials", adjoint_trials, "number of random trials");
    cmd_adjoint->add_option("--seed", adjoint_seed, "RNG seed");
    cmd_adjoint->add_option("--tol", adjoint_tol, "maximum allowed relative mismatch");

    auto* cmd_metrics = app.add_subcommand("metrics", "relative error / residual of a reconstruction");
    ConfigCli metrics_cfg;
    metrics_cfg.add_common(cmd_metrics);
    std::string metrics_recon;
    std::string metrics_truth;
    std::string metrics_data;
    cmd_metrics->add_option("--recon", metrics_recon, "reconstruction .patf")->required();
    cmd_metrics->add_option("--truth", metrics_truth, "ground-truth .patf")->required();
    cmd_metrics->add_option("--data", metrics_data, "data .pats (enables rel_residual)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_phantom->parsed()) {
            const pat::ExperimentConfig cfg = phantom_cfg.resolve();
            const pat::Grid2D grid = pat::make_grid(cfg.n_omega, cfg.oversize);
            const pat::ScalarField f = pat::make_phantom(pat::omega_subgrid(grid), cfg.phantom);
            pat::write_field(f, phantom_out);
            if (!phantom_pgm.empty()) pat::write_pgm(f, phantom_pgm);
            if (!phantom_csv.empty()) pat::write_field_csv(f, phantom_csv);
            std::cout << "wrote " << phantom_out << " (" << f.grid.nx << "x" << f.grid.ny << ")\n";
        } else if (cmd_medium->parsed()) {
            const pat::ExperimentConfig cfg = medium_cfg.resolve();
            const pat::Grid2D grid = pat::make_grid(cfg.n_omega, cfg.oversize);
            const pat::Medium m = pat::make_medium(grid, cfg.medium_c, cfg.medium_a);
            pat::write_field(m.c, medium_out_c);
            pat::write_field(m.a, medium_out_a);
            if (!medium_pgm_c.empty()) pat::write_pgm(m.c, medium_pgm_c);
            if (!medium_pgm_a.empty()) pat::write_pgm(m.a, medium_pgm_a);
            std::cout << "wrote " << medium_out_c << ", " << medium_out_a << " (c_plus=" << m.c_plus
                      << ")\n";
        } else if (cmd_simulate->parsed()) {
            const pat::ExperimentConfig cfg = simulate_cfg.resolve();
            pat::validate_config(cfg);
            const pat::Sinogram g = pat::simulate_data(cfg, cfg.fine_data);
            pat::write_sinogram(g, simulate_out);
            if (!simulate_pgm.empty()) pat::write_pgm(g, simulate_pgm);
            std::cout << "wrote " << simulate_out << " (" << g.count << " sensors x " << g.nt
                      << " samples, h_t=" << g.h_t << ")\n";
        } else if (cmd_noise->parsed()) {
            const pat::Sinogram g = pat::read_sinogram(noise_in);
            const pat::NoisyData noisy = pat::add_noise(g, noise_rel, noise_seed);
            pat::write_sinogram(noisy.data, noise_out);
            std::cout << "wrote " << noise_out << " (noise l2 norm " << noisy.noise_l2 << ")\n";
        } else if (cmd_reconstruct->parsed()) {
            const pat::ExperimentConfig cfg = reconstruct_cfg.resolve();
            pat::run_experiment(cfg);
            std::cout << "artifacts in " << cfg.outdir << "\n";
        } else if (cmd_adjoint->parsed()) {
            const pat::ExperimentConfig cfg = adjoint_cfg.resolve();
            pat::validate_config(cfg);
            const pat::PatOperator op = pat::build_operator(cfg);
            const pat::AdjointTestReport rep = pat::adjoint_test(op, adjoint_trials, adjoint_seed);
            for (size_t i = 0; i < rep.mismatches.size(); ++i) {
                std::cout << "trial " << i << ": relative mismatch " << rep.mismatches[i] << "\n";
            }
            std::cout << "max mismatch " << rep.max_mismatch << " (tol " << adjoint_tol << ")\n";
            if (rep.max_mismatch > adjoint_tol) {
                std::cerr << "adjoint-test: FAILED\n";
                return kExitNumerical;
            }
        } else if (cmd_metrics->parsed()) {
            const pat::ScalarField recon = pat::read_field(metrics_recon);
            const pat::ScalarField truth = pat::read_field(metrics_truth);
            std::cout << "rel_error " << pat::rel_error(recon, truth) << "\n";
            if (!metrics_data.empty()) {
                const pat::ExperimentConfig cfg = metrics_cfg.resolve();
                const pat::PatOperator op = pat::build_operator(cfg);
                const pat::Sinogram g = pat::read_sinogram(metrics_data);
                std::cout << "rel_residual " << pat::rel_residual(op, recon, g) << "\n";
            }
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitOk;
}
