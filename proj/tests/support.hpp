// Shared test utilities: small dense linear algebra, reference oracles that
// are independent of the library's solution paths, and the explicit-matrix
// surrogate assembled from the real forward operator at tiny scale.
#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "pat/experiment.hpp"
#include "pat/operators.hpp"

namespace testsup {

// Gaussian elimination with partial pivoting; a is n x n row-major.
inline std::vector<double> gauss_solve(std::vector<double> a, std::vector<double> b) {
    const int n = static_cast<int>(b.size());
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r) {
            if (std::abs(a[(size_t)r * n + col]) > std::abs(a[(size_t)piv * n + col])) piv = r;
        }
        if (a[(size_t)piv * n + col] == 0.0) throw std::runtime_error("gauss_solve: singular matrix");
        if (piv != col) {
            for (int c = 0; c < n; ++c) std::swap(a[(size_t)piv * n + c], a[(size_t)col * n + c]);
            std::swap(b[(size_t)piv], b[(size_t)col]);
        }
        for (int r = col + 1; r < n; ++r) {
            const double m = a[(size_t)r * n + col] / a[(size_t)col * n + col];
            if (m == 0.0) continue;
            for (int c = col; c < n; ++c) a[(size_t)r * n + c] -= m * a[(size_t)col * n + c];
            b[(size_t)r] -= m * b[(size_t)col];
        }
    }
    std::vector<double> x(static_cast<size_t>(n), 0.0);
    for (int r = n - 1; r >= 0; --r) {
        double s = b[(size_t)r];
        for (int c = r + 1; c < n; ++c) s -= a[(size_t)r * n + c] * x[(size_t)c];
        x[(size_t)r] = s / a[(size_t)r * n + r];
    }
    return x;
}

// Largest eigenvalue of a symmetric matrix by cyclic Jacobi rotations.
inline double jacobi_max_eigenvalue(std::vector<double> a, int n) {
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n - 1; ++p)
            for (int q = p + 1; q < n; ++q) off += a[(size_t)p * n + q] * a[(size_t)p * n + q];
        if (off < 1e-24) break;
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = a[(size_t)p * n + q];
                if (apq == 0.0) continue;
                const double app = a[(size_t)p * n + p];
                const double aqq = a[(size_t)q * n + q];
                const double phi = 0.5 * std::atan2(2.0 * apq, aqq - app);
                const double c = std::cos(phi);
                const double s = std::sin(phi);
                for (int k = 0; k < n; ++k) {
                    const double akp = a[(size_t)k * n + p];
                    const double akq = a[(size_t)k * n + q];
                    a[(size_t)k * n + p] = c * akp - s * akq;
                    a[(size_t)k * n + q] = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const double apk = a[(size_t)p * n + k];
                    const double aqk = a[(size_t)q * n + k];
                    a[(size_t)p * n + k] = c * apk - s * aqk;
                    a[(size_t)q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    double m = a[0];
    for (int i = 1; i < n; ++i) m = std::max(m, a[(size_t)i * n + i]);
    return m;
}

// Exact 1D total-variation denoising: the unique minimizer of
//   1/2 sum (f_i - y_i)^2 + lambda sum |f_{i+1} - f_i|
// (the taut-string solution), computed through the dual box program
//   min_u 1/2 || y - D^T u ||^2  s.t.  |u_i| <= lambda
// by cyclic coordinate descent run to a fixed point. The dual is strictly
// convex, so the fixed point is the exact solution and f = y - D^T u.
inline std::vector<double> taut_string_denoise(const std::vector<double>& y, double lambda) {
    const int n = static_cast<int>(y.size());
    if (n <= 1 || lambda <= 0.0) return y;
    const int m = n - 1;
    std::vector<double> u(static_cast<size_t>(m), 0.0);
    std::vector<double> z = y;  // z = y - D^T u, kept up to date

    for (int sweep = 0; sweep < 200000; ++sweep) {
        double max_change = 0.0;
        for (int i = 0; i < m; ++i) {
            // coordinate-wise exact minimization: diag(D D^T) = 2
            const double grad_step = 0.5 * (z[(size_t)i + 1] - z[(size_t)i]);
            double ui = u[(size_t)i] + grad_step;
            ui = std::clamp(ui, -lambda, lambda);
            const double d = ui - u[(size_t)i];
            if (d != 0.0) {
                u[(size_t)i] = ui;
                // D^T u contributes -u_i at sample i and +u_i at sample i+1
                z[(size_t)i] += d;
                z[(size_t)i + 1] -= d;
                max_change = std::max(max_change, std::abs(d));
            }
        }
        if (max_change < 1e-15) break;
    }
    return z;
}

// Reference integrator for the single-mode damped oscillation
//   c^-2 P'' + a P' + |xi|^2 P = 0,  P(0) = 1,  P'(0) = -c^2 a,
// classic RK4 with many substeps; independent of the spectral stepper.
inline double damped_mode_reference(double c, double a, double xi_norm, double t_final, int substeps) {
    const double c2 = c * c;
    double p = 1.0;
    double v = -c2 * a;
    const double h = t_final / substeps;
    auto acc = [&](double pp, double vv) { return -c2 * (a * vv + xi_norm * xi_norm * pp); };
    for (int i = 0; i < substeps; ++i) {
        const double k1p = v, k1v = acc(p, v);
        const double k2p = v + 0.5 * h * k1v, k2v = acc(p + 0.5 * h * k1p, v + 0.5 * h * k1v);
        const double k3p = v + 0.5 * h * k2v, k3v = acc(p + 0.5 * h * k2p, v + 0.5 * h * k2v);
        const double k4p = v + h * k3v, k4v = acc(p + h * k3p, v + h * k3v);
        p += h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
        v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
    }
    return p;
}

// Explicit 20 x 12 matrix: unit impulses at twelve well-separated interior
// pixels pushed through a tiny real forward operator, sampled at four sensors
// and five time levels.
inline pat::DenseOperator make_dense_surrogate() {
    pat::ExperimentConfig cfg = pat::default_config();
    cfg.n_omega = 7;
    cfg.nt = 17;
    cfg.T = 2.5;
    const pat::PatOperator op = pat::build_operator(cfg);
    const pat::Grid2D og = op.omega_grid();

    std::vector<int> ball;
    for (int iy = 0; iy < og.ny; ++iy) {
        for (int ix = 0; ix < og.nx; ++ix) {
            if (op.omega0_mask().at(ix, iy) > 0.0) ball.push_back(og.idx(ix, iy));
        }
    }
    // every other ball pixel, wrapping once past the end: spread, distinct,
    // and the resulting normal matrix is well conditioned (kappa ~ 50)
    std::vector<int> pixels;
    for (int j = 0; j < 12; ++j) {
        pixels.push_back(ball[(size_t)(2 * j) % ball.size()]);
    }

    const int sensor_ids[4] = {0, 6, 12, 18};
    const int time_ids[5] = {4, 7, 10, 13, 16};
    std::vector<double> a(20 * 12, 0.0);
    for (int j = 0; j < 12; ++j) {
        pat::ScalarField e(og);
        e.values[(size_t)pixels[(size_t)j]] = 1.0;
        const pat::Sinogram gj = op.forward(e);
        int row = 0;
        for (int s : sensor_ids) {
            for (int k : time_ids) {
                a[(size_t)row * 12 + j] = gj.at(s, k);
                ++row;
            }
        }
    }
    return pat::DenseOperator(20, 12, std::move(a));
}

}  // namespace testsup
