#include "pat/operators.hpp"

#include <cmath>
#include <stdexcept>

namespace pat {

PatOperator::PatOperator(const Grid2D& grid, Medium medium, SensorArray sensors, int nt, double h_t)
    : grid_(grid),
      omega_grid_(omega_subgrid(grid)),
      medium_(std::move(medium)),
      sensors_(std::move(sensors)),
      nt_(nt),
      h_t_(h_t) {
    if (!(medium_.c.grid == grid_)) throw std::invalid_argument("PatOperator: medium lives on a different grid");
    if (nt_ < 2) throw std::invalid_argument("PatOperator: nt must be >= 2");
    if (!(h_t_ > 0.0)) throw std::invalid_argument("PatOperator: h_t must be > 0");
    if (sensors_.count() == 0) throw std::invalid_argument("PatOperator: empty sensor array");

    mask_ = ball_mask(omega_grid_, 0.9);
    inv_c2_.resize(static_cast<size_t>(omega_grid_.size()));
    const ScalarField c_omega = restrict_omega(medium_.c);
    for (size_t i = 0; i < inv_c2_.size(); ++i) {
        inv_c2_[i] = 1.0 / (c_omega.values[i] * c_omega.values[i]);
    }
}

void PatOperator::apply_mask(ScalarField& f_omega) const {
    for (size_t i = 0; i < f_omega.values.size(); ++i) f_omega.values[i] *= mask_.values[i];
}

Sinogram PatOperator::forward(const ScalarField& f_omega) const {
    if (!(f_omega.grid == omega_grid_)) throw std::invalid_argument("PatOperator::forward: grid mismatch");
    ScalarField masked = f_omega;
    apply_mask(masked);
    const ScalarField f_comp = embed_omega(masked, grid_);
    return simulate(f_comp, medium_, sensors_, nt_, h_t_).data;
}

ScalarField PatOperator::adjoint(const Sinogram& g) const {
    if (g.count != sensors_.count() || g.nt != nt_) {
        throw std::invalid_argument("PatOperator::adjoint: sinogram dimensions mismatch");
    }

    const ScalarField zero(grid_);
    WaveState st = init_state(zero, medium_, h_t_);
    const SpectralKernel kernel = make_kernel(grid_, medium_.c0, h_t_);
    SpectralWorkspace ws(grid_.nx, grid_.ny);

    // Time-reversed, chi-windowed data injected on the sensor pixels; the
    // surface delta is discretized as 1/h times the pixel indicator.
    ScalarField src(grid_);
    const double inv_h = 1.0 / grid_.h;
    const int count = sensors_.count();

    // One step beyond the final time (consuming the t = 0 data column) so the
    // time derivative can be taken by a centered difference. The one-sided
    // difference loses a full order and visibly degrades the normal-equation
    // solvers, so the extra step is worth it.
    ScalarField p_minus(grid_);
    for (int k = 0; k < nt_; ++k) {
        const int column = nt_ - 1 - k;
        for (int s = 0; s < count; ++s) {
            src.values[static_cast<size_t>(sensors_.cells[s])] =
                sensors_.chi[s] * g.at(s, column) * inv_h;
        }
        step(st, medium_, kernel, ws, &src);
        if (st.t_index == nt_ - 2) p_minus = st.p;
    }

    ScalarField dq(grid_);
    const double inv_2ht = 1.0 / (2.0 * h_t_);
    for (size_t i = 0; i < dq.values.size(); ++i) {
        dq.values[i] = (st.p.values[i] - p_minus.values[i]) * inv_2ht;
    }
    ScalarField out = restrict_omega(dq);
    apply_mask(out);
    return out;
}

double PatOperator::inner_x(const ScalarField& f1, const ScalarField& f2) const {
    if (!(f1.grid == omega_grid_) || !(f2.grid == omega_grid_)) {
        throw std::invalid_argument("PatOperator::inner_x: grid mismatch");
    }
    const double h2 = grid_.h * grid_.h;
    double s = 0.0;
    for (size_t i = 0; i < f1.values.size(); ++i) {
        s += mask_.values[i] * inv_c2_[i] * f1.values[i] * f2.values[i];
    }
    return h2 * s;
}

double PatOperator::norm_x(const ScalarField& f) const { return std::sqrt(inner_x(f, f)); }

double PatOperator::inner_y(const Sinogram& g1, const Sinogram& g2) const {
    if (g1.count != sensors_.count() || g1.nt != nt_ || g2.count != g1.count || g2.nt != g1.nt) {
        throw std::invalid_argument("PatOperator::inner_y: sinogram dimensions mismatch");
    }
    double s = 0.0;
    for (int sen = 0; sen < g1.count; ++sen) {
        const double chi = sensors_.chi[sen];
        if (chi == 0.0) continue;
        double row = 0.0;
        const double* a = &g1.values[static_cast<size_t>(sen) * nt_];
        const double* b = &g2.values[static_cast<size_t>(sen) * nt_];
        for (int k = 0; k < nt_; ++k) row += a[k] * b[k];
        s += chi * row;
    }
    return grid_.h * h_t_ * s;
}

double PatOperator::norm_y(const Sinogram& g) const { return std::sqrt(inner_y(g, g)); }

DenseOperator::Data DenseOperator::forward(const Image& f) const {
    if (static_cast<int>(f.size()) != cols_) throw std::invalid_argument("DenseOperator::forward: size mismatch");
    Data g(static_cast<size_t>(rows_), 0.0);
    for (int i = 0; i < rows_; ++i) {
        const double* row = &a_[static_cast<size_t>(i) * cols_];
        double s = 0.0;
        for (int j = 0; j < cols_; ++j) s += row[j] * f[j];
        g[static_cast<size_t>(i)] = s;
    }
    return g;
}

DenseOperator::Image DenseOperator::adjoint(const Data& g) const {
    if (static_cast<int>(g.size()) != rows_) throw std::invalid_argument("DenseOperator::adjoint: size mismatch");
    Image f(static_cast<size_t>(cols_), 0.0);
    for (int i = 0; i < rows_; ++i) {
        const double* row = &a_[static_cast<size_t>(i) * cols_];
        const double gi = g[static_cast<size_t>(i)];
        for (int j = 0; j < cols_; ++j) f[static_cast<size_t>(j)] += row[j] * gi;
    }
    return f;
}

}  // namespace pat
