#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <unistd.h>

#include "pat/experiment.hpp"
#include "pat/io.hpp"
#include "pat/metrics.hpp"
#include "pat/noise.hpp"

using namespace pat;

namespace {

namespace fs = std::filesystem;

struct TempDir {
    fs::path path;
    TempDir() : path(fs::temp_directory_path() / ("pat_test_" + std::to_string(::getpid()))) {
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

std::vector<char> slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return std::vector<char>(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("field and sinogram files round-trip bitwise") {
    TempDir tmp;
    SplitMix64 rng(7);

    const Grid2D g = make_grid(9, 2);
    ScalarField f(g);
    for (double& v : f.values) v = rng.uniform_pm1() * 1e3;
    write_field(f, tmp.file("f.patf"));
    const ScalarField f2 = read_field(tmp.file("f.patf"));
    CHECK(f2.grid.nx == g.nx);
    CHECK(f2.grid.ny == g.ny);
    CHECK(f2.grid.h == doctest::Approx(g.h));
    CHECK(f2.values == f.values);

    Sinogram s(12, 9, 0.025);
    for (double& v : s.values) v = rng.uniform_pm1();
    write_sinogram(s, tmp.file("s.pats"));
    const Sinogram s2 = read_sinogram(tmp.file("s.pats"));
    CHECK(s2.count == s.count);
    CHECK(s2.nt == s.nt);
    CHECK(s2.h_t == s.h_t);
    CHECK(s2.values == s.values);

    // corrupted magic is rejected
    {
        std::ofstream bad(tmp.file("bad.patf"), std::ios::binary);
        bad << "NOPE" << std::string(60, '\0');
    }
    CHECK_THROWS_AS(read_field(tmp.file("bad.patf")), std::invalid_argument);
}

TEST_CASE("pgm and csv writers produce well-formed output") {
    TempDir tmp;
    const Grid2D g = make_grid(5, 2);
    ScalarField f(g);
    for (size_t i = 0; i < f.values.size(); ++i) f.values[i] = static_cast<double>(i % 7) - 3.0;
    write_pgm(f, tmp.file("f.pgm"));
    const auto bytes = slurp(tmp.file("f.pgm"));
    REQUIRE(bytes.size() > 15);
    CHECK(bytes[0] == 'P');
    CHECK(bytes[1] == '5');

    write_field_csv(f, tmp.file("f.csv"));
    std::ifstream csv(tmp.file("f.csv"));
    std::string line;
    int rows = 0;
    while (std::getline(csv, line)) ++rows;
    CHECK(rows == g.ny);
}

TEST_CASE("iteration log csv includes the objective column only when present") {
    TempDir tmp;
    IterationLog log;
    log.entries = {{0, 1.0, 1.0, 0.5, 0.0, std::numeric_limits<double>::quiet_NaN()},
                   {1, 0.5, 0.5, 0.25, 0.1, std::numeric_limits<double>::quiet_NaN()}};
    write_iteration_log_csv(log, tmp.file("a.csv"));
    std::ifstream a(tmp.file("a.csv"));
    std::string header;
    std::getline(a, header);
    CHECK(header == "k,residual,rel_residual,rel_error,seconds");

    log.entries[1].objective = 0.75;
    write_iteration_log_csv(log, tmp.file("b.csv"));
    std::ifstream b(tmp.file("b.csv"));
    std::getline(b, header);
    CHECK(header == "k,residual,rel_residual,rel_error,seconds,objective");
}

TEST_CASE("noise injection") {
    Sinogram g(6, 11, 0.01);
    SplitMix64 rng(19);
    for (double& v : g.values) v = rng.uniform_pm1() + 0.3;

    SUBCASE("zero target returns the input unchanged") {
        const NoisyData n = add_noise(g, 0.0, 5);
        CHECK(n.data.values == g.values);
        CHECK(n.noise_l2 == 0.0);
    }

    SUBCASE("realized relative error is exact") {
        const NoisyData n = add_noise(g, 0.59, 5);
        double num = 0.0;
        double den = 0.0;
        for (size_t i = 0; i < g.values.size(); ++i) {
            const double d = n.data.values[i] - g.values[i];
            num += d * d;
            den += g.values[i] * g.values[i];
        }
        CHECK(std::sqrt(num / den) == doctest::Approx(0.59).epsilon(1e-12));
        CHECK(n.noise_l2 == doctest::Approx(0.59 * std::sqrt(den)).epsilon(1e-12));
    }

    SUBCASE("same seed, same noise; different seed, different noise") {
        const NoisyData a = add_noise(g, 0.2, 42);
        const NoisyData b = add_noise(g, 0.2, 42);
        CHECK(a.data.values == b.data.values);
        const NoisyData c = add_noise(g, 0.2, 43);
        CHECK(a.data.values != c.data.values);
    }

    SUBCASE("zero data cannot carry relative noise") {
        Sinogram z(4, 3, 0.1);
        CHECK_THROWS_AS(add_noise(z, 0.1, 1), std::invalid_argument);
    }
}

TEST_CASE("sinogram restriction") {
    // fine sinogram sampling a smooth separable function; the restriction
    // must pick even time samples and average fine sensor pairs
    const int coarse_count = 8;
    const int coarse_nt = 5;
    Sinogram fine(2 * coarse_count, 2 * coarse_nt - 1, 0.5);
    for (int s = 0; s < fine.count; ++s) {
        for (int k = 0; k < fine.nt; ++k) {
            fine.at(s, k) = std::sin(0.3 * s) + 0.1 * k;
        }
    }
    const Sinogram coarse = restrict_sinogram(fine, coarse_count, coarse_nt);
    CHECK(coarse.h_t == doctest::Approx(1.0));
    for (int s = 0; s < coarse_count; ++s) {
        for (int k = 0; k < coarse_nt; ++k) {
            const double expect = 0.5 * (fine.at(2 * s, 2 * k) + fine.at(2 * s + 1, 2 * k));
            CHECK(coarse.at(s, k) == doctest::Approx(expect));
        }
    }
    CHECK_THROWS_AS(restrict_sinogram(fine, coarse_count, coarse_nt + 1), std::invalid_argument);
    CHECK_THROWS_AS(restrict_sinogram(fine, coarse_count - 1, coarse_nt), std::invalid_argument);
}

TEST_CASE("config loading, overrides and validation") {
    TempDir tmp;
    {
        std::ofstream cfg(tmp.file("exp.cfg"));
        cfg << "# comment\n"
            << "n_omega = 17\n"
            << "nt = 21\n"
            << "method = tv\n"
            << "lambda = 0.2\n"
            << "sensors = half_plane:-0.25\n"
            << "outdir = " << tmp.file("out") << "\n";
    }
    ExperimentConfig cfg = load_config(tmp.file("exp.cfg"));
    CHECK(cfg.n_omega == 17);
    CHECK(cfg.method == "tv");
    CHECK(cfg.lambda == doctest::Approx(0.2));
    CHECK(cfg.sensors.kind == SensorView::Kind::HalfPlane);
    validate_config(cfg);

    apply_config_override(cfg, "method", "cg");
    CHECK(cfg.method == "cg");
    CHECK_THROWS_AS(apply_config_override(cfg, "bogus_key", "1"), std::invalid_argument);
    CHECK_THROWS_AS(apply_config_override(cfg, "data_grid", "coarse"), std::invalid_argument);

    SUBCASE("tv without lambda is rejected") {
        ExperimentConfig c2 = default_config();
        c2.method = "tv";
        CHECK_THROWS_AS(validate_config(c2), std::invalid_argument);
    }

    SUBCASE("discrepancy stopping requires noise and tau > 1") {
        ExperimentConfig c2 = default_config();
        c2.stop = "discrepancy:1.5";
        CHECK_THROWS_AS(validate_config(c2), std::invalid_argument);  // no noise
        c2.noise_rel = 0.1;
        validate_config(c2);
        c2.stop = "discrepancy:0.9";
        CHECK_THROWS_AS(validate_config(c2), std::invalid_argument);
        CHECK_THROWS_AS(apply_config_override(c2, "stop", "whenever"), std::invalid_argument);
    }

    SUBCASE("unknown method is rejected") {
        ExperimentConfig c2 = default_config();
        c2.method = "magic";
        CHECK_THROWS_AS(validate_config(c2), std::invalid_argument);
    }
}

TEST_CASE("run_experiment writes a reproducible artifact set") {
    TempDir tmp;
    ExperimentConfig cfg = default_config();
    cfg.n_omega = 17;
    cfg.nt = 21;
    cfg.T = 2.0;
    cfg.method = "cg";
    cfg.max_iters = 3;
    cfg.noise_rel = 0.1;
    cfg.noise_seed = 5;
    cfg.outdir = tmp.file("run1");

    const ExperimentResult r1 = run_experiment(cfg);
    CHECK(r1.log.iterations() == 3);
    CHECK(std::isfinite(r1.final_rel_error));
    CHECK(r1.noise_delta_y > 0.0);
    for (const char* name : {"phantom.patf", "phantom.pgm", "data.pats", "data_clean.pats",
                             "data.pgm", "recon.patf", "recon.pgm", "log.csv"}) {
        CHECK(fs::exists(fs::path(cfg.outdir) / name));
    }

    cfg.outdir = tmp.file("run2");
    const ExperimentResult r2 = run_experiment(cfg);
    CHECK(slurp(tmp.file("run1") + "/recon.patf") == slurp(tmp.file("run2") + "/recon.patf"));
    CHECK(slurp(tmp.file("run1") + "/data.pats") == slurp(tmp.file("run2") + "/data.pats"));

    // reading back the artifacts reproduces the in-memory results
    const ScalarField recon = read_field(tmp.file("run2") + "/recon.patf");
    CHECK(recon.values == r2.reconstruction.values);
}

TEST_CASE("avoiding the inverse crime costs residual, as it should") {
    ExperimentConfig cfg = default_config();
    cfg.n_omega = 33;
    cfg.nt = 41;
    cfg.method = "cg";
    cfg.max_iters = 8;

    const PatOperator op = build_operator(cfg);
    const ScalarField truth = make_phantom(op.omega_grid(), cfg.phantom);
    const Sinogram g_same = simulate_data(cfg, false);
    const Sinogram g_fine = simulate_data(cfg, true);
    const auto res_same = cgne(op, g_same, StopRule::max_iterations(8), &truth);
    const auto res_fine = cgne(op, g_fine, StopRule::max_iterations(8), &truth);
    CHECK(res_same.log.back().rel_residual < res_fine.log.back().rel_residual);
}

TEST_CASE("adjoint test handles degenerate windows") {
    ExperimentConfig cfg = default_config();
    cfg.n_omega = 17;
    cfg.nt = 21;
    cfg.sensors = SensorView::half_plane(1.1);  // chi identically zero
    const PatOperator op = build_operator(cfg);
    const AdjointTestReport rep = adjoint_test(op, 2, 3);
    CHECK(rep.max_mismatch == 0.0);
}

TEST_CASE("rel_error and rel_residual conventions") {
    const Grid2D g = omega_subgrid(make_grid(5, 2));
    ScalarField truth(g);
    truth.at(2, 2) = 2.0;
    ScalarField same = truth;
    CHECK(rel_error(same, truth) == 0.0);
    ScalarField twice = truth;
    scal(2.0, twice);
    CHECK(rel_error(twice, truth) == doctest::Approx(1.0));
    ScalarField zero(g);
    CHECK(rel_error(zero, truth) == doctest::Approx(1.0));
    CHECK_THROWS_AS(rel_error(truth, zero), std::invalid_argument);
}
