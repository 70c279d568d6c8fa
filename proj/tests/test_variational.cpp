#include <doctest.h>

#include <cmath>

#include "pat/operators.hpp"
#include "pat/solvers.hpp"
#include "pat/variational.hpp"

#include "support.hpp"

using namespace pat;

namespace {

std::vector<double> random_vec(int n, uint64_t seed) {
    SplitMix64 rng(seed);
    std::vector<double> v(static_cast<size_t>(n));
    for (double& x : v) x = rng.uniform_pm1();
    return v;
}

DenseOperator random_dense(int rows, int cols, uint64_t seed) {
    SplitMix64 rng(seed);
    std::vector<double> a(static_cast<size_t>(rows) * cols);
    for (double& v : a) v = rng.uniform_pm1();
    return DenseOperator(rows, cols, std::move(a));
}

}  // namespace

TEST_CASE("discrete gradient pair") {
    const Gradient2D grad(7, 6);

    SUBCASE("constants are annihilated") {
        const std::vector<double> ones(42, 3.5);
        const auto q = grad.apply(ones);
        CHECK(norm_plain(q) == 0.0);
    }

    SUBCASE("unit impulse stencil") {
        std::vector<double> f(42, 0.0);
        const int ix = 3;
        const int iy = 2;
        f[(size_t)(iy * 7 + ix)] = 1.0;
        const auto q = grad.apply(f);
        int nonzero = 0;
        for (double v : q) {
            if (v != 0.0) {
                ++nonzero;
                CHECK(std::abs(v) == 1.0);
            }
        }
        CHECK(nonzero == 4);
        CHECK(q[(size_t)(iy * 7 + ix)] == -1.0);          // x-difference at the pixel
        CHECK(q[(size_t)(iy * 7 + ix - 1)] == 1.0);       // x-difference one left
        CHECK(q[(size_t)(42 + iy * 7 + ix)] == -1.0);     // y-difference at the pixel
        CHECK(q[(size_t)(42 + (iy - 1) * 7 + ix)] == 1.0);
    }

    SUBCASE("adjoint identity to machine precision") {
        const auto f = random_vec(42, 61);
        const auto q = random_vec(84, 63);
        const double lhs = dot_plain(grad.apply(f), q);
        const double rhs = dot_plain(f, grad.adjoint(q));
        CHECK(std::abs(lhs - rhs) <= 1e-12 * norm_plain(f) * norm_plain(q));
    }

    SUBCASE("1d pair shares the conventions") {
        const Gradient1D g1(9);
        const auto f = random_vec(9, 71);
        const auto q = random_vec(9, 73);
        const double lhs = dot_plain(g1.apply(f), q);
        const double rhs = dot_plain(f, g1.adjoint(q));
        CHECK(std::abs(lhs - rhs) <= 1e-13 * norm_plain(f) * norm_plain(q));
    }
}

TEST_CASE("dual clip projects onto the per-pixel ball") {
    const Gradient2D grad(1, 2);  // two pixels, x-block then y-block of size 2
    const double lambda = 0.1;

    std::vector<double> q = {0.03, 0.12, 0.04, 0.16};  // |q_0| = 0.05, |q_1| = 0.2
    grad.clip_to_ball(q, lambda);
    CHECK(q[0] == doctest::Approx(0.03));  // inside the ball: unchanged
    CHECK(q[2] == doctest::Approx(0.04));
    const double m1 = std::hypot(q[1], q[3]);
    CHECK(m1 == doctest::Approx(lambda).epsilon(1e-12));
    CHECK(q[1] == doctest::Approx(0.12 * lambda / 0.2));
    CHECK(q[3] == doctest::Approx(0.16 * lambda / 0.2));
}

TEST_CASE("gradient operator norm against a dense eigensolver") {
    const int n = 8;
    const Gradient2D grad(n, n);
    // assemble D^T D explicitly from impulses
    std::vector<double> dtd(static_cast<size_t>(n * n) * (n * n), 0.0);
    for (int j = 0; j < n * n; ++j) {
        std::vector<double> e(static_cast<size_t>(n * n), 0.0);
        e[(size_t)j] = 1.0;
        const auto col = grad.adjoint(grad.apply(e));
        for (int i = 0; i < n * n; ++i) dtd[(size_t)i * (n * n) + j] = col[(size_t)i];
    }
    const double lam_ref = testsup::jacobi_max_eigenvalue(dtd, n * n);
    const double est = gradient_norm(grad, 300);
    CHECK(est == doctest::Approx(std::sqrt(lam_ref)).epsilon(0.01));
    // top eigenvalue of the 2d forward-difference normal map
    const double analytic = 8.0 * std::pow(std::sin((n - 1) * M_PI / (2.0 * n)), 2);
    CHECK(lam_ref == doctest::Approx(analytic).epsilon(1e-10));
}

TEST_CASE("h1 reconstruction") {
    SUBCASE("zero data gives the zero minimizer") {
        const DenseOperator op = random_dense(10, 6, 81);
        const Gradient1D grad(6);
        const auto res = h1_reconstruct(op, grad, op.zero_data(), 0.3, StopRule::max_iterations(10));
        CHECK(norm_plain(res.f) == 0.0);
    }

    SUBCASE("lambda zero reproduces steepest descent exactly") {
        const DenseOperator op = random_dense(10, 6, 83);
        const Gradient1D grad(6);
        const auto g = random_vec(10, 85);
        const auto h1 = h1_reconstruct(op, grad, g, 0.0, StopRule::max_iterations(7));
        const auto sd = steepest_descent(op, g, StopRule::max_iterations(7));
        REQUIRE(h1.log.iterations() == sd.log.iterations());
        for (size_t i = 0; i < h1.f.size(); ++i) CHECK(h1.f[i] == sd.f[i]);
    }

    SUBCASE("converges to the regularized normal-equations solution") {
        const DenseOperator op = testsup::make_dense_surrogate();
        const Gradient1D grad(12);
        const auto g = random_vec(20, 87);
        const double lambda = 0.5;

        std::vector<double> lhs(12 * 12, 0.0);
        std::vector<double> rhs(12, 0.0);
        for (int i = 0; i < 20; ++i) {
            for (int a = 0; a < 12; ++a) {
                rhs[(size_t)a] += op.entry(i, a) * g[(size_t)i];
                for (int b = 0; b < 12; ++b) {
                    lhs[(size_t)a * 12 + b] += op.entry(i, a) * op.entry(i, b);
                }
            }
        }
        for (int a = 0; a < 12; ++a) {
            std::vector<double> e(12, 0.0);
            e[(size_t)a] = 1.0;
            const auto dtd = grad.adjoint(grad.apply(e));
            for (int b = 0; b < 12; ++b) lhs[(size_t)b * 12 + a] += lambda * dtd[(size_t)b];
        }
        const auto direct = testsup::gauss_solve(lhs, rhs);

        const auto res = h1_reconstruct(op, grad, g, lambda, StopRule::max_iterations(2000));
        double scale = 0.0;
        for (double v : direct) scale = std::max(scale, std::abs(v));
        for (size_t i = 0; i < direct.size(); ++i) {
            CHECK(res.f[i] == doctest::Approx(direct[i]).epsilon(1e-6).scale(scale));
        }
    }

    SUBCASE("objective decreases monotonically") {
        const DenseOperator op = random_dense(12, 8, 91);
        const Gradient1D grad(8);
        const auto g = random_vec(12, 93);
        const auto res = h1_reconstruct(op, grad, g, 0.2, StopRule::max_iterations(30));
        for (size_t i = 1; i < res.log.entries.size(); ++i) {
            CHECK(res.log.entries[i].objective <= res.log.entries[i - 1].objective * (1.0 + 1e-12));
        }
    }
}

TEST_CASE("tv reconstruction") {
    SUBCASE("zero data keeps all iterates zero") {
        const IdentityOperator op(16);
        const Gradient1D grad(16);
        const auto res = tv_reconstruct(op, grad, op.zero_data(), 0.5, 50);
        CHECK(norm_plain(res.f) == 0.0);
        for (const auto& e : res.log.entries) CHECK(e.rel_residual == 0.0);
    }

    SUBCASE("lambda must be positive and the norm estimate must succeed") {
        const IdentityOperator op(8);
        const Gradient1D grad(8);
        CHECK_THROWS_AS(tv_reconstruct(op, grad, op.zero_data(), 0.0, 5), std::invalid_argument);
    }

    SUBCASE("1d denoising matches the exact taut-string solution") {
        const int n = 64;
        std::vector<double> clean(n, 0.0);
        for (int i = 12; i < 30; ++i) clean[(size_t)i] = 1.0;
        for (int i = 40; i < 52; ++i) clean[(size_t)i] = -0.6;
        SplitMix64 rng(101);
        std::vector<double> noisy = clean;
        for (double& v : noisy) v += 0.12 * rng.uniform_pm1();

        const double lambda = 0.25;
        const auto exact = testsup::taut_string_denoise(noisy, lambda);

        const IdentityOperator op(n);
        const Gradient1D grad(n);
        const auto res = tv_reconstruct(op, grad, noisy, lambda, 2000);
        double max_err = 0.0;
        for (int i = 0; i < n; ++i) {
            max_err = std::max(max_err, std::abs(res.f[(size_t)i] - exact[(size_t)i]));
        }
        CHECK(max_err <= 1e-4);
    }

    SUBCASE("huge lambda flattens the reconstruction") {
        const int n = 48;
        const auto y = random_vec(n, 103);
        const IdentityOperator op(n);
        const Gradient1D grad(n);
        const auto mild = tv_reconstruct(op, grad, y, 0.1, 500);
        const auto heavy = tv_reconstruct(op, grad, y, 1e6, 500);
        const double tv_mild = grad.magnitude_l1(grad.apply(mild.f));
        const double tv_heavy = grad.magnitude_l1(grad.apply(heavy.f));
        CHECK(tv_heavy <= 0.01 * tv_mild);
    }

    SUBCASE("running minimum of the primal objective is nonincreasing and finite") {
        const DenseOperator op = random_dense(14, 9, 111);
        const Gradient1D grad(9);
        const auto g = random_vec(14, 113);
        const auto res = tv_reconstruct(op, grad, g, 0.05, 60);
        double running = res.log.entries.front().objective;
        for (const auto& e : res.log.entries) {
            CHECK(std::isfinite(e.objective));
            running = std::min(running, e.objective);
        }
        CHECK(running <= res.log.entries.front().objective);
        // the final objective must actually improve on the zero start
        CHECK(res.log.back().objective < res.log.entries.front().objective);
    }

    SUBCASE("pair norm is deterministic and scales with the operator") {
        const DenseOperator op = random_dense(10, 6, 115);
        const Gradient1D grad(6);
        CHECK(pair_norm(op, grad, 30) == pair_norm(op, grad, 30));
        CHECK(pair_norm(op, grad, 200) >= gradient_norm(grad, 200) - 1e-6);
    }
}
