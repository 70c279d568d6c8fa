#include "pat/fft.hpp"

#include <cstring>
#include <mutex>
#include <stdexcept>

namespace pat {

namespace {
// FFTW plan creation/destruction is not thread-safe; execution is.
std::mutex& plan_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

SpectralWorkspace::SpectralWorkspace(int nx, int ny) : nx_(nx), ny_(ny) {
    if (nx < 2 || ny < 2) throw std::invalid_argument("SpectralWorkspace: grid too small");
    std::lock_guard<std::mutex> lock(plan_mutex());
    rbuf_ = fftw_alloc_real(static_cast<size_t>(nx) * ny);
    cbuf_ = fftw_alloc_complex(static_cast<size_t>(ny) * (nx / 2 + 1));
    if (rbuf_ == nullptr || cbuf_ == nullptr) throw std::bad_alloc();
    // FFTW_ESTIMATE keeps plan selection deterministic run to run.
    fwd_ = fftw_plan_dft_r2c_2d(ny, nx, rbuf_, cbuf_, FFTW_ESTIMATE);
    inv_ = fftw_plan_dft_c2r_2d(ny, nx, cbuf_, rbuf_, FFTW_ESTIMATE);
    if (fwd_ == nullptr || inv_ == nullptr) throw std::runtime_error("SpectralWorkspace: FFTW planning failed");
}

SpectralWorkspace::~SpectralWorkspace() {
    std::lock_guard<std::mutex> lock(plan_mutex());
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(inv_);
    fftw_free(rbuf_);
    fftw_free(cbuf_);
}

void SpectralWorkspace::forward(const double* in, std::complex<double>* out) {
    std::memcpy(rbuf_, in, sizeof(double) * static_cast<size_t>(nx_) * ny_);
    fftw_execute(fwd_);
    std::memcpy(out, cbuf_, sizeof(fftw_complex) * static_cast<size_t>(spec_size()));
}

void SpectralWorkspace::inverse(const std::complex<double>* in, double* out) {
    std::memcpy(cbuf_, in, sizeof(fftw_complex) * static_cast<size_t>(spec_size()));
    fftw_execute(inv_);
    const double scale = 1.0 / (static_cast<double>(nx_) * ny_);
    const size_t n = static_cast<size_t>(nx_) * ny_;
    for (size_t i = 0; i < n; ++i) out[i] = rbuf_[i] * scale;
}

}  // namespace pat
