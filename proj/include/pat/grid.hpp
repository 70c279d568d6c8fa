#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace pat {

/// Uniform square grid. The physical region of interest [-1,1]^2 is embedded
/// in a larger computational square [-extent,extent]^2 so that the periodic
/// spectral solver does not wrap energy back into the region of interest too
/// early. Samples of [-1,1]^2 always coincide with grid samples.
struct Grid2D {
    int nx{0};
    int ny{0};
    double h{0.0};
    double x0{0.0};
    double y0{0.0};
    double extent{0.0};

    double x(int ix) const { return x0 + ix * h; }
    double y(int iy) const { return y0 + iy * h; }
    int idx(int ix, int iy) const { return iy * nx + ix; }
    int size() const { return nx * ny; }

    bool operator==(const Grid2D&) const = default;
};

/// Real-valued function sampled on a Grid2D, row-major (iy * nx + ix).
struct ScalarField {
    Grid2D grid;
    std::vector<double> values;

    ScalarField() = default;
    explicit ScalarField(const Grid2D& g) : grid(g), values(static_cast<size_t>(g.size()), 0.0) {}

    double& at(int ix, int iy) { return values[static_cast<size_t>(grid.idx(ix, iy))]; }
    double at(int ix, int iy) const { return values[static_cast<size_t>(grid.idx(ix, iy))]; }
};

/// Builds the computational grid for an n_omega-per-side sampling of [-1,1]^2
/// blown up by an integer oversize factor. n_omega must be odd so that the
/// embedding offset is a whole number of cells, and >= 3 so the region has an
/// interior.
Grid2D make_grid(int n_omega, int oversize);

/// Number of samples per side of the embedded [-1,1]^2 region.
int omega_samples(const Grid2D& grid);

/// Index offset (same in x and y) of the lower-left corner of [-1,1]^2
/// within the computational grid.
int omega_offset(const Grid2D& grid);

/// The [-1,1]^2 subgrid viewed as a standalone grid (extent 1).
Grid2D omega_subgrid(const Grid2D& grid);

/// Zero-pads an omega-grid field into the computational grid.
ScalarField embed_omega(const ScalarField& f_omega, const Grid2D& comp);

/// Restricts a computational-grid field to the omega subgrid.
ScalarField restrict_omega(const ScalarField& f_comp);

/// Indicator of the closed ball of the given radius centered at the origin.
ScalarField ball_mask(const Grid2D& grid, double radius);

bool all_finite(const ScalarField& f);
double max_abs(const ScalarField& f);

}  // namespace pat
