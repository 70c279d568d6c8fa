#pragma once

#include <complex>
#include <vector>

#include <fftw3.h>

namespace pat {

/// Real-to-complex 2D transform pair for one grid size. Owns its FFTW plans
/// and aligned buffers, so each simulation can hold a private workspace and
/// run concurrently with others (FFTW plan creation itself is serialized
/// behind a global mutex internally; execution is thread-safe).
///
/// Conventions: unnormalized forward transform, inverse divides by nx*ny.
/// Half-spectrum layout: index ky*(nx/2+1)+kx with kx = 0..nx/2 and ky along
/// the full range, matching FFTW's r2c storage for row-major (iy,ix) data.
class SpectralWorkspace {
  public:
    SpectralWorkspace(int nx, int ny);
    ~SpectralWorkspace();

    SpectralWorkspace(const SpectralWorkspace&) = delete;
    SpectralWorkspace& operator=(const SpectralWorkspace&) = delete;

    int nx() const { return nx_; }
    int ny() const { return ny_; }
    int spec_size() const { return ny_ * (nx_ / 2 + 1); }

    /// in: ny*nx reals. out: spec_size() complex values (unnormalized).
    void forward(const double* in, std::complex<double>* out);

    /// in: spec_size() complex values. out: ny*nx reals, scaled by 1/(nx*ny).
    void inverse(const std::complex<double>* in, double* out);

  private:
    int nx_;
    int ny_;
    double* rbuf_;
    fftw_complex* cbuf_;
    fftw_plan fwd_;
    fftw_plan inv_;
};

}  // namespace pat
