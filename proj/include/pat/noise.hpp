#pragma once

#include <cstdint>

#include "pat/sinogram.hpp"

namespace pat {

struct NoisyData {
    Sinogram data;
    double noise_l2{0.0};  // exact plain-l2 norm of the injected noise
};

/// Adds i.i.d. zero-mean Gaussian noise rescaled so the realized relative
/// plain-l2 error ||g_noisy - g|| / ||g|| equals target_rel exactly (up to
/// rounding). Deterministic for a fixed seed.
NoisyData add_noise(const Sinogram& g, double target_rel, uint64_t seed);

}  // namespace pat
