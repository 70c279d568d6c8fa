#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "pat/grid.hpp"
#include "pat/sinogram.hpp"

namespace pat {

// Uniform access to the flat value array of the container types used by the
// solvers. Lets the iteration templates work on grid fields, sinograms and
// plain vectors alike.
inline std::vector<double>& raw(std::vector<double>& v) { return v; }
inline const std::vector<double>& raw(const std::vector<double>& v) { return v; }
inline std::vector<double>& raw(ScalarField& f) { return f.values; }
inline const std::vector<double>& raw(const ScalarField& f) { return f.values; }
inline std::vector<double>& raw(Sinogram& g) { return g.values; }
inline const std::vector<double>& raw(const Sinogram& g) { return g.values; }

// y += a*x
template <class T>
void axpy(double a, const T& x, T& y) {
    const auto& xs = raw(x);
    auto& ys = raw(y);
    for (size_t i = 0; i < ys.size(); ++i) ys[i] += a * xs[i];
}

// y = x + a*(x - x_old), the extrapolation used by primal-dual iterations
template <class T>
void extrapolate(const T& x, const T& x_old, double a, T& y) {
    const auto& xs = raw(x);
    const auto& os = raw(x_old);
    auto& ys = raw(y);
    for (size_t i = 0; i < ys.size(); ++i) ys[i] = xs[i] + a * (xs[i] - os[i]);
}

template <class T>
void scal(double a, T& x) {
    for (double& v : raw(x)) v *= a;
}

template <class T>
void set_zero(T& x) {
    for (double& v : raw(x)) v = 0.0;
}

template <class T>
double dot_plain(const T& x, const T& y) {
    const auto& xs = raw(x);
    const auto& ys = raw(y);
    double s = 0.0;
    for (size_t i = 0; i < xs.size(); ++i) s += xs[i] * ys[i];
    return s;
}

template <class T>
double norm_plain(const T& x) {
    return std::sqrt(dot_plain(x, x));
}

template <class T>
void hadamard(const T& m, T& x) {
    const auto& ms = raw(m);
    auto& xs = raw(x);
    for (size_t i = 0; i < xs.size(); ++i) xs[i] *= ms[i];
}

/// Small deterministic PRNG (splitmix64); used wherever reproducible
/// pseudo-random data is needed so results do not depend on the platform's
/// standard-library distributions.
struct SplitMix64 {
    uint64_t state;

    explicit SplitMix64(uint64_t seed) : state(seed) {}

    uint64_t next() {
        uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0,1).
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform in [-1,1).
    double uniform_pm1() { return 2.0 * uniform() - 1.0; }
};

/// Standard normal deviates via Box-Muller on top of SplitMix64.
struct GaussianGen {
    SplitMix64 rng;
    bool has_spare{false};
    double spare{0.0};

    explicit GaussianGen(uint64_t seed) : rng(seed) {}

    double next() {
        if (has_spare) {
            has_spare = false;
            return spare;
        }
        double u1 = 0.0;
        do {
            u1 = rng.uniform();
        } while (u1 <= 0.0);
        const double u2 = rng.uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * M_PI * u2;
        spare = r * std::sin(theta);
        has_spare = true;
        return r * std::cos(theta);
    }
};

}  // namespace pat
