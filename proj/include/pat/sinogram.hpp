#pragma once

#include <vector>

namespace pat {

/// Sensor-by-time matrix of boundary pressure samples. Row s holds the trace
/// of sensor s at times 0, h_t, ..., (nt-1)*h_t.
struct Sinogram {
    int count{0};
    int nt{0};
    double h_t{0.0};
    std::vector<double> values;

    Sinogram() = default;
    Sinogram(int count_, int nt_, double h_t_)
        : count(count_), nt(nt_), h_t(h_t_), values(static_cast<size_t>(count_) * nt_, 0.0) {}

    double& at(int s, int k) { return values[static_cast<size_t>(s) * nt + k]; }
    double at(int s, int k) const { return values[static_cast<size_t>(s) * nt + k]; }

    double final_time() const { return (nt - 1) * h_t; }
};

}  // namespace pat
