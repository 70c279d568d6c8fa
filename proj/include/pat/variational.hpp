#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "pat/linalg.hpp"
#include "pat/solvers.hpp"

namespace pat {

/// Discrete gradient on an nx-by-ny grid: plain forward differences with
/// zero (Neumann) extension at the last row/column, matching the fully
/// discrete penalty functionals (no mesh-width factor; the regularization
/// weight lambda absorbs the scale). Gradient-space vectors are flat arrays
/// [x-component block | y-component block], each block of size nx*ny.
/// adjoint() is the exact transpose, so <D f, q> = <f, adjoint(q)> holds to
/// machine precision in plain l2.
class Gradient2D {
  public:
    Gradient2D(int nx, int ny) : nx_(nx), ny_(ny) {
        if (nx < 1 || ny < 1) throw std::invalid_argument("Gradient2D: bad grid");
    }

    int n() const { return nx_ * ny_; }
    int field_size() const { return 2 * nx_ * ny_; }

    std::vector<double> apply(const std::vector<double>& f) const {
        const int n = nx_ * ny_;
        std::vector<double> q(static_cast<size_t>(2) * n, 0.0);
        for (int iy = 0; iy < ny_; ++iy) {
            for (int ix = 0; ix < nx_; ++ix) {
                const int i = iy * nx_ + ix;
                if (ix < nx_ - 1) q[i] = f[i + 1] - f[i];
                if (iy < ny_ - 1) q[n + i] = f[i + nx_] - f[i];
            }
        }
        return q;
    }

    std::vector<double> adjoint(const std::vector<double>& q) const {
        const int n = nx_ * ny_;
        std::vector<double> f(static_cast<size_t>(n), 0.0);
        for (int iy = 0; iy < ny_; ++iy) {
            for (int ix = 0; ix < nx_; ++ix) {
                const int i = iy * nx_ + ix;
                double acc = 0.0;
                if (ix >= 1) acc += q[i - 1];
                if (ix < nx_ - 1) acc -= q[i];
                if (iy >= 1) acc += q[n + i - nx_];
                if (iy < ny_ - 1) acc -= q[n + i];
                f[i] = acc;
            }
        }
        return f;
    }

    /// Pointwise projection onto the lambda-ball of the per-pixel 2-vector
    /// magnitude: q <- lambda * q / max(lambda, |q|).
    void clip_to_ball(std::vector<double>& q, double lambda) const {
        const int n = nx_ * ny_;
        for (int i = 0; i < n; ++i) {
            const double m = std::hypot(q[i], q[n + i]);
            if (m > lambda) {
                const double s = lambda / m;
                q[i] *= s;
                q[n + i] *= s;
            }
        }
    }

    /// Sum of per-pixel 2-vector magnitudes (the isotropic TV of q = D f).
    double magnitude_l1(const std::vector<double>& q) const {
        const int n = nx_ * ny_;
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += std::hypot(q[i], q[n + i]);
        return s;
    }

  private:
    int nx_;
    int ny_;
};

/// One-dimensional forward-difference gradient, same conventions as
/// Gradient2D with a single component block.
class Gradient1D {
  public:
    explicit Gradient1D(int n) : n_(n) {
        if (n < 1) throw std::invalid_argument("Gradient1D: bad size");
    }

    int n() const { return n_; }
    int field_size() const { return n_; }

    std::vector<double> apply(const std::vector<double>& f) const {
        std::vector<double> q(static_cast<size_t>(n_), 0.0);
        for (int i = 0; i + 1 < n_; ++i) q[i] = f[i + 1] - f[i];
        return q;
    }

    std::vector<double> adjoint(const std::vector<double>& q) const {
        std::vector<double> f(static_cast<size_t>(n_), 0.0);
        for (int i = 0; i < n_; ++i) {
            double acc = 0.0;
            if (i >= 1) acc += q[i - 1];
            if (i < n_ - 1) acc -= q[i];
            f[i] = acc;
        }
        return f;
    }

    void clip_to_ball(std::vector<double>& q, double lambda) const {
        for (int i = 0; i < n_; ++i) {
            const double m = std::abs(q[i]);
            if (m > lambda) q[i] *= lambda / m;
        }
    }

    double magnitude_l1(const std::vector<double>& q) const {
        double s = 0.0;
        for (int i = 0; i < n_; ++i) s += std::abs(q[i]);
        return s;
    }

  private:
    int n_;
};

namespace detail {

inline std::vector<double> seeded_start(size_t n, uint64_t seed) {
    SplitMix64 rng(seed);
    std::vector<double> v(n);
    for (double& x : v) x = rng.uniform_pm1();
    return v;
}

template <class ApplyFn, class InnerFn>
double rayleigh_power_norm(std::vector<double> v, ApplyFn&& apply_normal, InnerFn&& inner, int iters,
                           uint64_t seed) {
    if (iters < 1) throw std::invalid_argument("power iteration needs iters >= 1");
    double nv = std::sqrt(inner(v, v));
    if (nv == 0.0) {
        v = seeded_start(v.size(), seed ^ 0x9e3779b97f4a7c15ULL);  // resample once
        nv = std::sqrt(inner(v, v));
        if (nv == 0.0) throw std::invalid_argument("power iteration: start vector is zero");
    }
    for (double& x : v) x /= nv;
    double lambda = 0.0;
    for (int i = 0; i < iters; ++i) {
        std::vector<double> w = apply_normal(v);
        lambda = inner(v, w);
        const double nw = std::sqrt(inner(w, w));
        if (nw == 0.0) return 0.0;  // normal map annihilated the iterate
        for (size_t j = 0; j < w.size(); ++j) w[j] /= nw;
        v = std::move(w);
    }
    return std::sqrt(std::max(lambda, 0.0));
}

}  // namespace detail

/// ||W|| estimated by power iteration on W*W in the operator's own weighted
/// geometry. Deterministic for a fixed seed.
template <class Op>
double operator_norm(const Op& op, int iters, uint64_t seed = 42) {
    typename Op::Image probe = op.zero_image();
    const size_t n = raw(probe).size();
    auto pack = [&](const std::vector<double>& v) {
        typename Op::Image f = op.zero_image();
        raw(f) = v;
        return f;
    };
    auto apply_normal = [&](const std::vector<double>& v) {
        typename Op::Image f = pack(v);
        typename Op::Image nf = op.adjoint(op.forward(f));
        return raw(nf);
    };
    auto inner = [&](const std::vector<double>& a, const std::vector<double>& b) {
        typename Op::Image fa = pack(a);
        typename Op::Image fb = pack(b);
        return op.inner_x(fa, fb);
    };
    return detail::rayleigh_power_norm(detail::seeded_start(n, seed), apply_normal, inner, iters, seed);
}

/// ||D|| estimated by power iteration on D^T D in plain l2.
template <class Grad>
double gradient_norm(const Grad& grad, int iters, uint64_t seed = 42) {
    auto apply_normal = [&](const std::vector<double>& v) { return grad.adjoint(grad.apply(v)); };
    auto inner = [](const std::vector<double>& a, const std::vector<double>& b) {
        return dot_plain(a, b);
    };
    return detail::rayleigh_power_norm(detail::seeded_start(static_cast<size_t>(grad.n()), seed),
                                       apply_normal, inner, iters, seed);
}

/// ||(W, D)|| of the stacked operator, power iteration on W*W + D^T D.
template <class Op, class Grad>
double pair_norm(const Op& op, const Grad& grad, int iters, uint64_t seed = 42) {
    auto pack = [&](const std::vector<double>& v) {
        typename Op::Image f = op.zero_image();
        raw(f) = v;
        return f;
    };
    auto apply_normal = [&](const std::vector<double>& v) {
        typename Op::Image f = pack(v);
        typename Op::Image nf = op.adjoint(op.forward(f));
        std::vector<double> out = raw(nf);
        const std::vector<double> dtd = grad.adjoint(grad.apply(v));
        for (size_t i = 0; i < out.size(); ++i) out[i] += dtd[i];
        return out;
    };
    auto inner = [](const std::vector<double>& a, const std::vector<double>& b) {
        return dot_plain(a, b);
    };
    typename Op::Image probe = op.zero_image();
    return detail::rayleigh_power_norm(detail::seeded_start(raw(probe).size(), seed), apply_normal,
                                       inner, iters, seed);
}

/// Step size 0.9 * 2 / ||W*W|| for the constant-step iteration. The Rayleigh
/// estimate from a short power iteration sits well below the top of this
/// operator's tightly clustered spectrum (25% low is typical here, and the
/// approximate adjoint adds a non-normal wobble on top), so the estimate gets
/// a 2x headroom before the stability bound is applied.
template <class Op>
double default_landweber_gamma(const Op& op, int iters = 20, uint64_t seed = 77) {
    const double L = operator_norm(op, iters, seed);
    if (L == 0.0) throw SolverError("default_landweber_gamma: operator norm estimate is zero");
    return 0.9 * 2.0 / (2.0 * L * L);
}

/// Quadratically penalized reconstruction: descends along
///   s_k = W*(W f_k - g) + lambda D^T D f_k,
/// projected onto the support mask, with the exact line search of the
/// quadratic 1/2 ||W f - g||_Y^2 + (lambda w / 2) ||D f||_2^2 where
/// w = op.data_scale() keeps the plain-sum penalty commensurable with the
/// weighted data term (for plain-l2 operators w = 1 and this is exactly the
/// discrete Tikhonov functional). With lambda = 0 the iterates coincide with
/// steepest_descent.
template <class Op, class Grad>
SolveResult<Op> h1_reconstruct(const Op& op, const Grad& grad, const typename Op::Data& g,
                               double lambda, const StopRule& stop,
                               const typename Op::Image* truth = nullptr,
                               const typename Op::Image* support_mask = nullptr) {
    if (lambda < 0.0) throw std::invalid_argument("h1_reconstruct: lambda must be >= 0");
    detail::Stopwatch clock;
    const double tn = detail::truth_norm_checked(truth);
    const double gnorm = op.norm_y(g);
    const double pen_w = lambda * op.data_scale();

    SolveResult<Op> out{op.zero_image(), {}};
    typename Op::Data wf = op.zero_data();
    std::vector<double> df(static_cast<size_t>(grad.field_size()), 0.0);
    double residual = gnorm;

    auto objective = [&]() {
        typename Op::Data r = wf;
        axpy(-1.0, g, r);
        return 0.5 * dot_plain(raw(r), raw(r)) + 0.5 * lambda * dot_plain(df, df);
    };
    auto log = [&](int k) {
        out.log.entries.push_back({k, residual, gnorm > 0.0 ? residual / gnorm : 0.0,
                                   detail::truth_error(out.f, truth, tn), clock.seconds(), objective()});
    };
    log(0);
    if (stop.satisfied(residual)) return out;

    for (int k = 0; k < stop.max_iters; ++k) {
        typename Op::Data r = wf;
        axpy(-1.0, g, r);
        typename Op::Image s = op.adjoint(r);
        {
            const std::vector<double> pen = grad.adjoint(df);
            auto& sv = raw(s);
            for (size_t i = 0; i < sv.size(); ++i) sv[i] += lambda * pen[i];
        }
        if (support_mask != nullptr) hadamard(*support_mask, s);
        const double ns2 = op.inner_x(s, s);
        if (ns2 == 0.0) break;
        typename Op::Data ws = op.forward(s);
        const std::vector<double> ds = grad.apply(raw(s));
        const double num = op.inner_y(ws, r) + pen_w * dot_plain(ds, df);
        const double den = op.inner_y(ws, ws) + pen_w * dot_plain(ds, ds);
        if (den == 0.0) throw SolverError("h1_reconstruct: degenerate line search denominator");
        if (num <= 0.0) break;  // direction no longer descends the functional
        const double gamma = num / den;
        axpy(-gamma, s, out.f);
        axpy(-gamma, ws, wf);
        for (size_t i = 0; i < df.size(); ++i) df[i] -= gamma * ds[i];
        typename Op::Data rr = wf;
        axpy(-1.0, g, rr);
        residual = op.norm_y(rr);
        log(k + 1);
        if (stop.satisfied(residual)) break;
    }
    return out;
}

/// Total-variation reconstruction by the primal-dual (Chambolle-Pock type)
/// iteration with unit extrapolation:
///   p <- (p + sigma (W u - g)) / (1 + sigma)
///   q <- clip_lambda(q + sigma D u)
///   f <- f - tau (W* p + D^T q)          (projected onto the support mask)
///   u <- f + theta (f - f_prev)
/// Steps sigma = tau = 1/L with L a safety-padded power-iteration estimate of
/// ||(W, D)||, so sigma*tau*L^2 <= 1.
template <class Op, class Grad>
SolveResult<Op> tv_reconstruct(const Op& op, const Grad& grad, const typename Op::Data& g,
                               double lambda, int iters,
                               const typename Op::Image* truth = nullptr,
                               const typename Op::Image* support_mask = nullptr,
                               double norm_estimate = 0.0) {
    if (!(lambda > 0.0)) throw std::invalid_argument("tv_reconstruct: lambda must be > 0");
    if (iters < 0) throw std::invalid_argument("tv_reconstruct: iters must be >= 0");
    detail::Stopwatch clock;
    const double tn = detail::truth_norm_checked(truth);
    const double gnorm = op.norm_y(g);

    const double l_raw = norm_estimate > 0.0 ? norm_estimate : pair_norm(op, grad, 30, 42);
    if (!(l_raw > 0.0) || !std::isfinite(l_raw)) {
        throw SolverError("tv_reconstruct: operator norm estimation failed");
    }
    const double L = 1.01 * l_raw;
    const double sigma = 1.0 / L;
    const double tau = 1.0 / L;
    const double theta = 1.0;
    if (sigma * tau * L * L > 1.0 + 1e-12) throw SolverError("tv_reconstruct: step sizes violate sigma*tau*L^2 <= 1");

    SolveResult<Op> out{op.zero_image(), {}};
    typename Op::Image f_prev = out.f;
    typename Op::Image u = out.f;
    typename Op::Data p = op.zero_data();
    std::vector<double> q(static_cast<size_t>(grad.field_size()), 0.0);
    typename Op::Data wf = op.zero_data();  // W f_k, tracked through the extrapolation identity

    // Residual and objective of iterate k become available one pass later
    // (when W u_k has been evaluated), so entries are appended with those two
    // slots empty and finalized on the following pass.
    auto finalize_entry = [&](IterationEntry& e) {
        typename Op::Data r = wf;
        axpy(-1.0, g, r);
        e.residual = op.norm_y(r);
        e.rel_residual = gnorm > 0.0 ? e.residual / gnorm : 0.0;
        e.objective = 0.5 * dot_plain(raw(r), raw(r)) + lambda * grad.magnitude_l1(grad.apply(raw(out.f)));
    };
    out.log.entries.push_back({0, gnorm, gnorm > 0.0 ? 1.0 : 0.0,
                               detail::truth_error(out.f, truth, tn), clock.seconds(),
                               0.5 * dot_plain(raw(g), raw(g))});

    for (int k = 0; k < iters; ++k) {
        typename Op::Data wu = op.forward(u);
        if (k > 0) {
            // W f_k = (W u_k + theta * W f_{k-1}) / (1 + theta)
            auto& wfv = raw(wf);
            const auto& wuv = raw(wu);
            for (size_t i = 0; i < wfv.size(); ++i) wfv[i] = (wuv[i] + theta * wfv[i]) / (1.0 + theta);
            finalize_entry(out.log.entries.back());
        }
        {
            auto& pv = raw(p);
            const auto& wuv = raw(wu);
            const auto& gv = raw(g);
            for (size_t i = 0; i < pv.size(); ++i) {
                pv[i] = (pv[i] + sigma * (wuv[i] - gv[i])) / (1.0 + sigma);
            }
        }
        {
            const std::vector<double> du = grad.apply(raw(u));
            for (size_t i = 0; i < q.size(); ++i) q[i] += sigma * du[i];
            grad.clip_to_ball(q, lambda);
        }
        typename Op::Image incr = op.adjoint(p);
        {
            const std::vector<double> dtq = grad.adjoint(q);
            auto& iv = raw(incr);
            for (size_t i = 0; i < iv.size(); ++i) iv[i] += dtq[i];
        }
        if (support_mask != nullptr) hadamard(*support_mask, incr);
        f_prev = out.f;
        axpy(-tau, incr, out.f);
        extrapolate(out.f, f_prev, theta, u);
        out.log.entries.push_back({k + 1, std::numeric_limits<double>::quiet_NaN(),
                                   std::numeric_limits<double>::quiet_NaN(),
                                   detail::truth_error(out.f, truth, tn), clock.seconds(),
                                   std::numeric_limits<double>::quiet_NaN()});
    }

    if (iters > 0) {
        wf = op.forward(out.f);
        finalize_entry(out.log.entries.back());
    }
    return out;
}

}  // namespace pat
