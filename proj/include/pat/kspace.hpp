#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <utility>

#include "pat/fft.hpp"
#include "pat/grid.hpp"
#include "pat/medium.hpp"
#include "pat/sensors.hpp"
#include "pat/sinogram.hpp"

namespace pat {

/// Thrown when the propagating fields stop being finite; carries the time
/// index of the offending step.
class PropagationError : public std::runtime_error {
  public:
    PropagationError(const std::string& what, int t_index)
        : std::runtime_error(what + " at time index " + std::to_string(t_index)), t_index_(t_index) {}

    int t_index() const { return t_index_; }

  private:
    int t_index_;
};

/// Fourier multipliers of the constant-speed time stepper, stored on the
/// half spectrum of the grid:
///   prop = 4 sin(c0 |xi| h_t / 2)^2
///   src  = 4 (c0 h_t / 2)^2 sinc(c0 |xi| h_t / 2)^2
/// with frequencies xi = 2*pi*k/(n*h), k in the symmetric index set. The
/// source weight is the exact Duhamel factor of the forced oscillator
/// w_tt = -(c0|xi|)^2 w + c0^2 s for a source held constant over a step.
struct SpectralKernel {
    int nx{0};
    int ny{0};
    double c0{0.0};
    double h_t{0.0};
    std::vector<double> prop;
    std::vector<double> src;
};

SpectralKernel make_kernel(const Grid2D& grid, double c0, double h_t);

/// Rolling state of the time stepper: the constant-speed auxiliary wave w at
/// the current and previous time level, the speed-contrast auxiliary v, the
/// damping integral r, and the physical pressure p = v + w_curr - r.
/// With a homogeneous medium (c == c0) v stays identically zero.
struct WaveState {
    ScalarField w_curr;
    ScalarField w_prev;
    ScalarField v;
    ScalarField r;
    ScalarField p;
    int t_index{0};
    double h_t{0.0};
};

/// State at t = 0 encoding initial pressure p(0) = f. The history level is
/// flat, w(-h_t) = w(0); the damping-induced initial velocity
/// p_t(0) = -c^2 a f then emerges from the first damping-integral update.
WaveState init_state(const ScalarField& f, const Medium& medium, double h_t);

/// Advances the state by one time step:
///   w_next = 2 w - w_prev - IDFT[prop * DFT[w + v - r] - src * DFT[s]]
///   v <- (c^2/c0^2 - 1) (w_next - r),  p <- v + w_next - r,
///   r <- r + c0^2 a p h_t
/// where r on the right-hand sides is the previous level. The optional source
/// slice s is taken at the current time level.
void step(WaveState& state, const Medium& medium, const SpectralKernel& kernel,
          SpectralWorkspace& ws, const ScalarField* source = nullptr);

/// Supplies the source slice for a given time index. The same field object is
/// passed on every step (zero-initialized before the first call); samples the
/// filler does not write keep their previous value.
using SourceFiller = std::function<void(int t_index, ScalarField& s)>;

struct SimulateResult {
    Sinogram data;
    WaveState state;
};

/// Runs nt-1 steps and records the pressure at the sensor pixels at every
/// time level, including t = 0 where p = f.
SimulateResult simulate(const ScalarField& f, const Medium& medium, const SensorArray& sensors,
                        int nt, double h_t, const SourceFiller& source = {});

/// Spectral partial derivatives of a field (periodic), for diagnostics such
/// as energy tracking. Nyquist rows/columns of even grids are zeroed.
std::pair<ScalarField, ScalarField> spectral_gradient(const ScalarField& f, SpectralWorkspace& ws);

}  // namespace pat
