#pragma once

#include <string>

#include "pat/grid.hpp"
#include "pat/sinogram.hpp"
#include "pat/solvers.hpp"

namespace pat {

// Field file (.patf), little-endian binary:
//   magic "PATF", u32 nx, u32 ny, f32 h, then nx*ny f64 row-major.
// The grid is reconstructed as a centered square on read.
void write_field(const ScalarField& f, const std::string& path);
ScalarField read_field(const std::string& path);

// Sinogram file (.pats), little-endian binary:
//   magic "PATS", u32 count, u32 nt, f64 h_t, then count*nt f64 row-major.
void write_sinogram(const Sinogram& g, const std::string& path);
Sinogram read_sinogram(const std::string& path);

/// 8-bit binary PGM with values linearly rescaled to [0,255].
void write_pgm(const ScalarField& f, const std::string& path);
void write_pgm(const Sinogram& g, const std::string& path);

/// Comma-separated value dump of a (small) field, one row per grid row.
void write_field_csv(const ScalarField& f, const std::string& path);

/// Per-iteration log: k, residual, rel_residual, rel_error, seconds and,
/// when present, the primal objective of the variational methods.
void write_iteration_log_csv(const IterationLog& log, const std::string& path);

}  // namespace pat
