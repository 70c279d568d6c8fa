#include "pat/kspace.hpp"

#include <cmath>

namespace pat {

namespace {

double sinc(double x) {
    if (std::abs(x) < 1e-8) return 1.0 - x * x / 6.0;
    return std::sin(x) / x;
}

void check_same_grid(const Grid2D& a, const Grid2D& b, const char* what) {
    if (!(a == b)) throw std::invalid_argument(std::string(what) + ": grid mismatch");
}

}  // namespace

SpectralKernel make_kernel(const Grid2D& grid, double c0, double h_t) {
    if (!(c0 > 0.0)) throw std::invalid_argument("make_kernel: c0 must be > 0");
    if (!(h_t > 0.0)) throw std::invalid_argument("make_kernel: h_t must be > 0");
    SpectralKernel k;
    k.nx = grid.nx;
    k.ny = grid.ny;
    k.c0 = c0;
    k.h_t = h_t;
    const int nkx = grid.nx / 2 + 1;
    k.prop.resize(static_cast<size_t>(grid.ny) * nkx);
    k.src.resize(k.prop.size());
    const double fx = 2.0 * M_PI / (grid.nx * grid.h);
    const double fy = 2.0 * M_PI / (grid.ny * grid.h);
    const double half_step = c0 * h_t / 2.0;
    for (int ky = 0; ky < grid.ny; ++ky) {
        const int kys = ky <= grid.ny / 2 ? ky : ky - grid.ny;
        const double xi_y = fy * kys;
        for (int kx = 0; kx < nkx; ++kx) {
            const double xi_x = fx * kx;
            const double arg = half_step * std::sqrt(xi_x * xi_x + xi_y * xi_y);
            const double s = std::sin(arg);
            const size_t i = static_cast<size_t>(ky) * nkx + kx;
            k.prop[i] = 4.0 * s * s;
            // Duhamel-consistent source weight: 4 (c0 h_t / 2)^2 sinc^2(...),
            // i.e. the leading 4 of the update spans the source term as well.
            const double sc = sinc(arg);
            k.src[i] = 4.0 * half_step * half_step * sc * sc;
        }
    }
    return k;
}

WaveState init_state(const ScalarField& f, const Medium& medium, double h_t) {
    check_same_grid(f.grid, medium.c.grid, "init_state");
    if (!(h_t > 0.0)) throw std::invalid_argument("init_state: h_t must be > 0");
    WaveState st;
    st.h_t = h_t;
    st.t_index = 0;
    st.w_curr = ScalarField(f.grid);
    st.w_prev = ScalarField(f.grid);
    st.v = ScalarField(f.grid);
    st.r = ScalarField(f.grid);
    st.p = ScalarField(f.grid);
    const size_t n = f.values.size();
    const double c0_sq = medium.c0 * medium.c0;
    for (size_t i = 0; i < n; ++i) {
        const double c_sq = medium.c.values[i] * medium.c.values[i];
        const double ratio = c0_sq / c_sq;
        const double w0 = ratio * f.values[i];
        st.w_curr.values[i] = w0;
        st.v.values[i] = (1.0 - ratio) * f.values[i];
        // Flat history level: the damping integral r already produces the
        // initial velocity p_t(0) = -c^2 a f through the first pressure
        // update, so a damping-weighted ghost level would double it and the
        // solution would converge to the wrong initial-value problem.
        st.w_prev.values[i] = w0;
        st.p.values[i] = st.v.values[i] + w0 - st.r.values[i];
    }
    return st;
}

void step(WaveState& state, const Medium& medium, const SpectralKernel& kernel,
          SpectralWorkspace& ws, const ScalarField* source) {
    check_same_grid(state.w_curr.grid, medium.c.grid, "step");
    if (kernel.nx != state.w_curr.grid.nx || kernel.ny != state.w_curr.grid.ny) {
        throw std::invalid_argument("step: kernel built for a different grid");
    }
    if (kernel.h_t != state.h_t || kernel.c0 != medium.c0) {
        throw std::invalid_argument("step: kernel built for different c0 or h_t");
    }
    if (source != nullptr) check_same_grid(source->grid, state.w_curr.grid, "step(source)");

    const size_t n = state.w_curr.values.size();
    const size_t ns = static_cast<size_t>(ws.spec_size());
    static thread_local std::vector<double> u;
    static thread_local std::vector<std::complex<double>> spec;
    static thread_local std::vector<std::complex<double>> spec_src;
    static thread_local std::vector<double> lap;
    u.resize(n);
    spec.resize(ns);
    lap.resize(n);

    const double* w = state.w_curr.values.data();
    const double* v = state.v.values.data();
    const double* r = state.r.values.data();
    for (size_t i = 0; i < n; ++i) u[i] = w[i] + v[i] - r[i];
    ws.forward(u.data(), spec.data());
    if (source != nullptr) {
        spec_src.resize(ns);
        ws.forward(source->values.data(), spec_src.data());
        for (size_t i = 0; i < ns; ++i) spec[i] = kernel.prop[i] * spec[i] - kernel.src[i] * spec_src[i];
    } else {
        for (size_t i = 0; i < ns; ++i) spec[i] *= kernel.prop[i];
    }
    ws.inverse(spec.data(), lap.data());

    double* wp = state.w_prev.values.data();
    double* vv = state.v.values.data();
    double* rr = state.r.values.data();
    double* pp = state.p.values.data();
    const double h_t = state.h_t;
    bool finite = true;
    for (size_t i = 0; i < n; ++i) {
        const double w_next = 2.0 * w[i] - wp[i] - lap[i];
        const double r_old = rr[i];
        const double v_next = medium.contrast[i] * (w_next - r_old);
        const double p_next = v_next + w_next - r_old;
        wp[i] = w_next;  // w_prev slot now holds w at t+h_t; swapped below
        vv[i] = v_next;
        pp[i] = p_next;
        rr[i] = r_old + medium.damp_rate[i] * p_next * h_t;
        finite = finite && std::isfinite(p_next) && std::isfinite(w_next);
    }
    std::swap(state.w_prev.values, state.w_curr.values);
    state.t_index += 1;
    if (!finite) {
        throw PropagationError("step: propagation produced non-finite values (instability)", state.t_index);
    }
}

SimulateResult simulate(const ScalarField& f, const Medium& medium, const SensorArray& sensors,
                        int nt, double h_t, const SourceFiller& source) {
    if (nt < 2) throw std::invalid_argument("simulate: nt must be >= 2");
    if (!(h_t > 0.0)) throw std::invalid_argument("simulate: h_t must be > 0");
    check_same_grid(f.grid, medium.c.grid, "simulate");

    SimulateResult out{Sinogram(sensors.count(), nt, h_t), init_state(f, medium, h_t)};
    const SpectralKernel kernel = make_kernel(f.grid, medium.c0, h_t);
    SpectralWorkspace ws(f.grid.nx, f.grid.ny);

    const int count = sensors.count();
    auto record = [&](int k) {
        for (int s = 0; s < count; ++s) {
            out.data.at(s, k) = out.state.p.values[static_cast<size_t>(sensors.cells[s])];
        }
    };
    record(0);

    ScalarField src_slice;
    if (source) src_slice = ScalarField(f.grid);
    for (int k = 0; k < nt - 1; ++k) {
        const ScalarField* src = nullptr;
        if (source) {
            source(k, src_slice);
            src = &src_slice;
        }
        step(out.state, medium, kernel, ws, src);
        record(k + 1);
    }
    return out;
}

std::pair<ScalarField, ScalarField> spectral_gradient(const ScalarField& f, SpectralWorkspace& ws) {
    const Grid2D& g = f.grid;
    if (ws.nx() != g.nx || ws.ny() != g.ny) throw std::invalid_argument("spectral_gradient: grid mismatch");
    const int nkx = g.nx / 2 + 1;
    std::vector<std::complex<double>> spec(static_cast<size_t>(ws.spec_size()));
    std::vector<std::complex<double>> tmp(spec.size());
    ws.forward(f.values.data(), spec.data());

    const double fx = 2.0 * M_PI / (g.nx * g.h);
    const double fy = 2.0 * M_PI / (g.ny * g.h);
    std::pair<ScalarField, ScalarField> out{ScalarField(g), ScalarField(g)};

    for (int ky = 0; ky < g.ny; ++ky) {
        for (int kx = 0; kx < nkx; ++kx) {
            const size_t i = static_cast<size_t>(ky) * nkx + kx;
            const bool nyq_x = (g.nx % 2 == 0) && (kx == g.nx / 2);
            const double xi_x = nyq_x ? 0.0 : fx * kx;
            tmp[i] = std::complex<double>(0.0, xi_x) * spec[i];
        }
    }
    ws.inverse(tmp.data(), out.first.values.data());

    for (int ky = 0; ky < g.ny; ++ky) {
        const int kys = ky <= g.ny / 2 ? ky : ky - g.ny;
        const bool nyq_y = (g.ny % 2 == 0) && (ky == g.ny / 2);
        const double xi_y = nyq_y ? 0.0 : fy * kys;
        for (int kx = 0; kx < nkx; ++kx) {
            const size_t i = static_cast<size_t>(ky) * nkx + kx;
            tmp[i] = std::complex<double>(0.0, xi_y) * spec[i];
        }
    }
    ws.inverse(tmp.data(), out.second.values.data());
    return out;
}

}  // namespace pat
