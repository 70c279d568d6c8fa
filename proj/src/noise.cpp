#include "pat/noise.hpp"

#include <cmath>
#include <stdexcept>

#include "pat/linalg.hpp"

namespace pat {

NoisyData add_noise(const Sinogram& g, double target_rel, uint64_t seed) {
    if (target_rel < 0.0) throw std::invalid_argument("add_noise: target_rel must be >= 0");
    NoisyData out{g, 0.0};
    if (target_rel == 0.0) return out;

    const double g_norm = norm_plain(g.values);
    if (g_norm == 0.0) {
        throw std::invalid_argument("add_noise: relative error is undefined for zero data");
    }

    GaussianGen gauss(seed);
    std::vector<double> noise(g.values.size());
    double n2 = 0.0;
    for (double& v : noise) {
        v = gauss.next();
        n2 += v * v;
    }
    // Rescale so the realized relative error equals target_rel exactly.
    const double scale = target_rel * g_norm / std::sqrt(n2);
    for (size_t i = 0; i < noise.size(); ++i) out.data.values[i] += scale * noise[i];
    out.noise_l2 = target_rel * g_norm;
    return out;
}

}  // namespace pat
