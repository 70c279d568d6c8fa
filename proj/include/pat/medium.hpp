#pragma once

#include <string>
#include <vector>

#include "pat/grid.hpp"

namespace pat {

/// Phantom / coefficient primitive: either a hard disk indicator or a
/// compactly supported C-infinity bump
///   amp * exp(1 - 1/(1 - (|x-c|/r)^2))   for |x-c| < r, 0 outside.
struct PrimitiveSpec {
    enum class Kind { Disk, Bump };
    Kind kind{Kind::Disk};
    double cx{0.0};
    double cy{0.0};
    double radius{0.0};
    double amp{0.0};
};

/// Constant plus a sum of smooth bumps; used for sound speed and damping.
struct CoefficientSpec {
    double base{0.0};
    std::vector<PrimitiveSpec> bumps;
};

/// Acoustic medium: variable sound speed c (bounded below by a positive
/// constant) and nonnegative damping a. c_plus = max c is also the reference
/// speed c0 of the spectral time stepper. The contrast and damp_rate arrays
/// are derived per-sample coefficients used on every time step.
struct Medium {
    ScalarField c;
    ScalarField a;
    double c_plus{0.0};
    double c0{0.0};
    std::vector<double> contrast;   // c^2/c0^2 - 1
    std::vector<double> damp_rate;  // c0^2 * a
};

/// Samples a sum of primitives. Every primitive must be supported strictly
/// inside the ball of radius 0.9 (the admissible source region); anything
/// poking outside is rejected.
ScalarField make_phantom(const Grid2D& grid, const std::vector<PrimitiveSpec>& prims);

/// Samples speed and damping specs and validates min c > 0, min a >= 0.
Medium make_medium(const Grid2D& grid, const CoefficientSpec& c_spec, const CoefficientSpec& a_spec);

/// Parses "disk:cx,cy,r,amp; bump:cx,cy,r,amp; ..." primitive lists.
std::vector<PrimitiveSpec> parse_primitives(const std::string& text);

/// Parses "const:v; bump:cx,cy,r,amp; ..." coefficient specs.
CoefficientSpec parse_coefficient(const std::string& text);

}  // namespace pat
