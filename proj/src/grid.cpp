#include "pat/grid.hpp"

#include <cmath>

namespace pat {

Grid2D make_grid(int n_omega, int oversize) {
    if (n_omega < 3) throw std::invalid_argument("make_grid: n_omega must be >= 3");
    if (n_omega % 2 == 0) {
        throw std::invalid_argument("make_grid: n_omega must be odd so [-1,1]^2 lands on samples");
    }
    if (oversize < 2) throw std::invalid_argument("make_grid: oversize factor must be >= 2");
    Grid2D g;
    g.h = 2.0 / (n_omega - 1);
    g.nx = oversize * (n_omega - 1) + 1;
    g.ny = g.nx;
    g.extent = static_cast<double>(oversize);
    g.x0 = -g.extent;
    g.y0 = -g.extent;
    return g;
}

int omega_samples(const Grid2D& grid) {
    return static_cast<int>(std::lround(2.0 / grid.h)) + 1;
}

int omega_offset(const Grid2D& grid) {
    return static_cast<int>(std::lround((-1.0 - grid.x0) / grid.h));
}

Grid2D omega_subgrid(const Grid2D& grid) {
    Grid2D g;
    g.nx = omega_samples(grid);
    g.ny = g.nx;
    g.h = grid.h;
    g.x0 = -1.0;
    g.y0 = -1.0;
    g.extent = 1.0;
    return g;
}

ScalarField embed_omega(const ScalarField& f_omega, const Grid2D& comp) {
    const int off = omega_offset(comp);
    const int m = f_omega.grid.nx;
    if (omega_samples(comp) != m) throw std::invalid_argument("embed_omega: grid mismatch");
    ScalarField out(comp);
    for (int iy = 0; iy < m; ++iy) {
        for (int ix = 0; ix < m; ++ix) {
            out.at(off + ix, off + iy) = f_omega.at(ix, iy);
        }
    }
    return out;
}

ScalarField restrict_omega(const ScalarField& f_comp) {
    const Grid2D sub = omega_subgrid(f_comp.grid);
    const int off = omega_offset(f_comp.grid);
    ScalarField out(sub);
    for (int iy = 0; iy < sub.ny; ++iy) {
        for (int ix = 0; ix < sub.nx; ++ix) {
            out.at(ix, iy) = f_comp.at(off + ix, off + iy);
        }
    }
    return out;
}

ScalarField ball_mask(const Grid2D& grid, double radius) {
    ScalarField m(grid);
    const double r2 = radius * radius;
    for (int iy = 0; iy < grid.ny; ++iy) {
        const double y = grid.y(iy);
        for (int ix = 0; ix < grid.nx; ++ix) {
            const double x = grid.x(ix);
            m.at(ix, iy) = (x * x + y * y <= r2) ? 1.0 : 0.0;
        }
    }
    return m;
}

bool all_finite(const ScalarField& f) {
    for (double v : f.values) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

double max_abs(const ScalarField& f) {
    double m = 0.0;
    for (double v : f.values) m = std::max(m, std::abs(v));
    return m;
}

}  // namespace pat
