#pragma once

#include <array>
#include <string>
#include <vector>

#include "pat/grid.hpp"

namespace pat {

/// Which part of the boundary of [-1,1]^2 records data.
struct SensorView {
    enum class Kind { Full, HalfPlane };
    Kind kind{Kind::Full};
    double threshold{0.0};  // HalfPlane: weight 1 iff x > threshold

    static SensorView full() { return {Kind::Full, 0.0}; }
    static SensorView half_plane(double threshold) { return {Kind::HalfPlane, threshold}; }
};

/// Ordered boundary pixels of [-1,1]^2 inside the computational grid, with a
/// binary per-sensor window weight chi. Pixels are enumerated counterclockwise
/// starting at (-1,-1); each side is half-open so every corner is owned by
/// exactly one side and an m-per-side region yields 4(m-1) sensors.
struct SensorArray {
    std::vector<int> cells;                         // linear indices into the computational grid
    std::vector<std::array<double, 2>> positions;   // physical coordinates
    std::vector<double> chi;                        // window weights in {0,1}
    double h{0.0};                                  // boundary arc length per pixel

    int count() const { return static_cast<int>(cells.size()); }
};

SensorArray boundary_sensors(const Grid2D& grid, const SensorView& view);

SensorView parse_sensor_view(const std::string& text);

}  // namespace pat
