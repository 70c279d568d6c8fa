#pragma once

#include <vector>

#include "pat/grid.hpp"
#include "pat/kspace.hpp"
#include "pat/linalg.hpp"
#include "pat/medium.hpp"
#include "pat/sensors.hpp"
#include "pat/sinogram.hpp"

namespace pat {

/// Forward map of the photoacoustic problem and its adjoint in the weighted
/// geometry used by all solvers:
///   image space: fields on the [-1,1]^2 subgrid supported in the 0.9-ball,
///                <f1,f2> = h^2 sum c^-2 f1 f2 over ball samples
///   data space:  sensor-time traces, <g1,g2> = h h_t sum chi g1 g2.
///
/// forward() embeds the (ball-masked) image into the computational grid and
/// time-steps the damped wave equation, sampling every boundary pixel; the
/// window chi is applied only in the data inner product and in the adjoint.
/// adjoint() runs the same propagator on the time-reversed, chi-windowed data
/// injected as a boundary source (surface delta discretized as 1/h on the
/// sensor pixels) and returns the centered-difference time derivative of the
/// pressure at the final level, restricted to the ball.
class PatOperator {
  public:
    using Image = ScalarField;
    using Data = Sinogram;

    PatOperator(const Grid2D& grid, Medium medium, SensorArray sensors, int nt, double h_t);

    Sinogram forward(const ScalarField& f_omega) const;
    ScalarField adjoint(const Sinogram& g) const;

    double inner_x(const ScalarField& f1, const ScalarField& f2) const;
    double norm_x(const ScalarField& f) const;
    double inner_y(const Sinogram& g1, const Sinogram& g2) const;
    double norm_y(const Sinogram& g) const;

    /// Quadrature weight relating plain data-space sums to inner_y
    /// (inner_y = data_scale * sum chi * a * b); penalty terms that live in
    /// plain sums are scaled by this to stay commensurable with the data term.
    double data_scale() const { return grid_.h * h_t_; }

    ScalarField zero_image() const { return ScalarField(omega_grid_); }
    Sinogram zero_data() const { return Sinogram(sensors_.count(), nt_, h_t_); }

    const Grid2D& grid() const { return grid_; }
    const Grid2D& omega_grid() const { return omega_grid_; }
    const Medium& medium() const { return medium_; }
    const SensorArray& sensors() const { return sensors_; }
    const ScalarField& omega0_mask() const { return mask_; }
    int nt() const { return nt_; }
    double h_t() const { return h_t_; }
    double final_time() const { return (nt_ - 1) * h_t_; }

    /// Ball-support mask applied to an omega-grid field, in place.
    void apply_mask(ScalarField& f_omega) const;

  private:
    Grid2D grid_;
    Grid2D omega_grid_;
    Medium medium_;
    SensorArray sensors_;
    int nt_;
    double h_t_;
    ScalarField mask_;                 // 0.9-ball indicator on the omega grid
    std::vector<double> inv_c2_;       // c^-2 restricted to the omega grid
};

/// Explicit-matrix operator with plain Euclidean inner products on both
/// sides. Used as a solver-algebra surrogate: small enough that direct dense
/// factorizations provide an independent reference solution.
class DenseOperator {
  public:
    using Image = std::vector<double>;
    using Data = std::vector<double>;

    DenseOperator(int rows, int cols, std::vector<double> a) : rows_(rows), cols_(cols), a_(std::move(a)) {}

    Data forward(const Image& f) const;
    Image adjoint(const Data& g) const;

    double inner_x(const Image& f1, const Image& f2) const { return dot_plain(f1, f2); }
    double norm_x(const Image& f) const { return norm_plain(f); }
    double inner_y(const Data& g1, const Data& g2) const { return dot_plain(g1, g2); }
    double norm_y(const Data& g) const { return norm_plain(g); }
    double data_scale() const { return 1.0; }

    Image zero_image() const { return Image(static_cast<size_t>(cols_), 0.0); }
    Data zero_data() const { return Data(static_cast<size_t>(rows_), 0.0); }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    double entry(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

  private:
    int rows_;
    int cols_;
    std::vector<double> a_;  // row-major rows_ x cols_
};

/// Identity map with Euclidean inner products; image and data coincide.
class IdentityOperator {
  public:
    using Image = std::vector<double>;
    using Data = std::vector<double>;

    explicit IdentityOperator(int n) : n_(n) {}

    Data forward(const Image& f) const { return f; }
    Image adjoint(const Data& g) const { return g; }
    double inner_x(const Image& a, const Image& b) const { return dot_plain(a, b); }
    double norm_x(const Image& a) const { return norm_plain(a); }
    double inner_y(const Data& a, const Data& b) const { return dot_plain(a, b); }
    double norm_y(const Data& a) const { return norm_plain(a); }
    double data_scale() const { return 1.0; }
    Image zero_image() const { return Image(static_cast<size_t>(n_), 0.0); }
    Data zero_data() const { return Data(static_cast<size_t>(n_), 0.0); }

  private:
    int n_;
};

}  // namespace pat
