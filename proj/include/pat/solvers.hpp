#pragma once

#include <chrono>
#include <cmath>
#include <iostream>
#include <limits>
#include <stdexcept>
#include <vector>

#include "pat/linalg.hpp"

namespace pat {

/// Numerical failure inside an iteration (divergence, breakdown).
class SolverError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Morozov stop requested but the residual never dropped below tau*delta.
class DiscrepancyNotReached : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct IterationEntry {
    int k{0};
    double residual{0.0};       // ||W f_k - g|| in the data-space norm
    double rel_residual{0.0};   // residual / ||g||
    double rel_error{std::numeric_limits<double>::quiet_NaN()};  // plain l2 vs ground truth
    double seconds{0.0};        // wall time since solver start
    double objective{std::numeric_limits<double>::quiet_NaN()};  // variational methods only
};

/// One entry per iterate, entry 0 describing the zero initial guess.
struct IterationLog {
    std::vector<IterationEntry> entries;

    int iterations() const { return static_cast<int>(entries.size()) - 1; }
    const IterationEntry& back() const { return entries.back(); }
};

/// Stopping policy: fixed iteration budget, or Morozov's discrepancy
/// principle (stop once the residual reaches tau*delta, tau > 1) with the
/// iteration budget as a cap.
struct StopRule {
    enum class Kind { MaxIters, Discrepancy };
    Kind kind{Kind::MaxIters};
    int max_iters{0};
    double delta{0.0};
    double tau{0.0};

    static StopRule max_iterations(int n) {
        if (n < 0) throw std::invalid_argument("StopRule: max_iters must be >= 0");
        return {Kind::MaxIters, n, 0.0, 0.0};
    }

    static StopRule discrepancy(double delta, double tau, int max_iters) {
        if (!(tau > 1.0)) throw std::invalid_argument("StopRule: discrepancy requires tau > 1");
        if (delta < 0.0) throw std::invalid_argument("StopRule: discrepancy requires delta >= 0");
        if (max_iters < 0) throw std::invalid_argument("StopRule: max_iters must be >= 0");
        return {Kind::Discrepancy, max_iters, delta, tau};
    }

    bool satisfied(double residual) const {
        return kind == Kind::Discrepancy && residual <= tau * delta;
    }
};

/// Smallest log index whose residual is <= tau*delta.
inline int discrepancy_stop(const IterationLog& log, double delta, double tau) {
    if (!(tau > 1.0)) throw std::invalid_argument("discrepancy_stop: tau must be > 1");
    if (delta < 0.0) throw std::invalid_argument("discrepancy_stop: delta must be >= 0");
    for (const auto& e : log.entries) {
        if (e.residual <= tau * delta) return e.k;
    }
    throw DiscrepancyNotReached("discrepancy_stop: residual never reached tau*delta");
}

namespace detail {

class Stopwatch {
  public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

  private:
    std::chrono::steady_clock::time_point start_;
};

template <class Image>
double truth_error(const Image& f, const Image* truth, double truth_norm) {
    if (truth == nullptr) return std::numeric_limits<double>::quiet_NaN();
    const auto& fv = raw(f);
    const auto& tv = raw(*truth);
    double s = 0.0;
    for (size_t i = 0; i < fv.size(); ++i) {
        const double d = fv[i] - tv[i];
        s += d * d;
    }
    return std::sqrt(s) / truth_norm;
}

template <class Image>
double truth_norm_checked(const Image* truth) {
    if (truth == nullptr) return 1.0;
    const double n = norm_plain(*truth);
    if (n == 0.0) throw std::invalid_argument("ground truth must be nonzero for error tracking");
    return n;
}

}  // namespace detail

template <class Op>
struct SolveResult {
    typename Op::Image f;
    IterationLog log;
};

/// Richardson iteration with constant step: f <- f - gamma W*(W f - g).
/// Aborts if the residual ever exceeds ten times its initial value, which
/// indicates a step size above the 2/||W*W|| stability bound.
template <class Op>
SolveResult<Op> landweber(const Op& op, const typename Op::Data& g, double gamma,
                          const StopRule& stop, const typename Op::Image* truth = nullptr) {
    if (!(gamma > 0.0)) throw std::invalid_argument("landweber: gamma must be > 0");
    detail::Stopwatch clock;
    const double tn = detail::truth_norm_checked(truth);
    const double gnorm = op.norm_y(g);

    SolveResult<Op> out{op.zero_image(), {}};
    typename Op::Data wf = op.zero_data();
    double residual = gnorm;
    auto log = [&](int k) {
        out.log.entries.push_back({k, residual, gnorm > 0.0 ? residual / gnorm : 0.0,
                                   detail::truth_error(out.f, truth, tn), clock.seconds(),
                                   std::numeric_limits<double>::quiet_NaN()});
    };
    log(0);
    if (stop.satisfied(residual)) return out;

    typename Op::Data r = g;
    for (int k = 0; k < stop.max_iters; ++k) {
        r = wf;
        axpy(-1.0, g, r);
        typename Op::Image s = op.adjoint(r);
        axpy(-gamma, s, out.f);
        wf = op.forward(out.f);
        r = wf;
        axpy(-1.0, g, r);
        residual = op.norm_y(r);
        log(k + 1);
        if (residual > 10.0 * gnorm) {
            throw SolverError("landweber: residual exceeded 10x its initial value; step size too large");
        }
        if (stop.satisfied(residual)) break;
    }
    return out;
}

/// Gradient descent on the residual functional along s_k = W*(W f_k - g)
/// with the exact line search gamma_k = <W s_k, r_k>_Y / ||W s_k||_Y^2. For a
/// perfectly adjoint pair this equals the textbook ||s_k||_X^2 / ||W s_k||_Y^2;
/// evaluating the pairing directly keeps the residual nonincreasing even
/// though the discretized adjoint is only approximate.
template <class Op>
SolveResult<Op> steepest_descent(const Op& op, const typename Op::Data& g, const StopRule& stop,
                                 const typename Op::Image* truth = nullptr) {
    detail::Stopwatch clock;
    const double tn = detail::truth_norm_checked(truth);
    const double gnorm = op.norm_y(g);

    SolveResult<Op> out{op.zero_image(), {}};
    typename Op::Data wf = op.zero_data();
    double residual = gnorm;
    auto log = [&](int k) {
        out.log.entries.push_back({k, residual, gnorm > 0.0 ? residual / gnorm : 0.0,
                                   detail::truth_error(out.f, truth, tn), clock.seconds(),
                                   std::numeric_limits<double>::quiet_NaN()});
    };
    log(0);
    if (stop.satisfied(residual)) return out;

    typename Op::Data r = g;
    for (int k = 0; k < stop.max_iters; ++k) {
        r = wf;
        axpy(-1.0, g, r);
        typename Op::Image s = op.adjoint(r);
        const double ns2 = op.inner_x(s, s);
        if (ns2 == 0.0) break;  // zero gradient: already at the minimizer
        typename Op::Data ws = op.forward(s);
        const double den = op.inner_y(ws, ws);
        if (den == 0.0) throw SolverError("steepest_descent: W s = 0 for a nonzero gradient");
        const double num = op.inner_y(ws, r);
        if (num <= 0.0) break;  // direction no longer reduces the residual
        const double gamma = num / den;
        axpy(-gamma, s, out.f);
        axpy(-gamma, ws, wf);
        r = wf;
        axpy(-1.0, g, r);
        residual = op.norm_y(r);
        log(k + 1);
        if (stop.satisfied(residual)) break;
    }
    return out;
}

/// Conjugate gradients on the normal equation W*W f = W*g, with all inner
/// products taken in the weighted image/data geometry. The residual is
/// tracked by recurrence; every tenth iterate it is verified against a fresh
/// forward evaluation and a warning is emitted if the two drift apart.
template <class Op>
SolveResult<Op> cgne(const Op& op, const typename Op::Data& g, const StopRule& stop,
                     const typename Op::Image* truth = nullptr) {
    detail::Stopwatch clock;
    const double tn = detail::truth_norm_checked(truth);
    const double gnorm = op.norm_y(g);

    SolveResult<Op> out{op.zero_image(), {}};
    typename Op::Data r = g;
    double residual = gnorm;
    auto log = [&](int k) {
        out.log.entries.push_back({k, residual, gnorm > 0.0 ? residual / gnorm : 0.0,
                                   detail::truth_error(out.f, truth, tn), clock.seconds(),
                                   std::numeric_limits<double>::quiet_NaN()});
    };
    log(0);
    if (stop.satisfied(residual)) return out;

    typename Op::Image d = op.adjoint(r);
    double rho = op.inner_x(d, d);  // ||W* r||_X^2
    if (rho == 0.0) return out;

    for (int k = 0; k < stop.max_iters; ++k) {
        typename Op::Data wd = op.forward(d);
        const double den = op.inner_y(wd, wd);
        if (den == 0.0) {
            if (rho > 0.0) throw SolverError("cgne: ||W d|| vanished while the normal residual is nonzero");
            break;
        }
        const double alpha = rho / den;
        axpy(alpha, d, out.f);
        axpy(-alpha, wd, r);
        residual = op.norm_y(r);
        if ((k + 1) % 10 == 0) {
            typename Op::Data fresh = op.forward(out.f);
            axpy(-1.0, g, fresh);
            const double fresh_norm = op.norm_y(fresh);
            const double drift = std::abs(fresh_norm - residual) / std::max(fresh_norm, 1e-300);
            if (drift > 1e-6) {
                std::cerr << "cgne: recurred residual drifted " << drift << " from fresh evaluation at k="
                          << (k + 1) << "\n";
            }
        }
        log(k + 1);
        if (stop.satisfied(residual)) break;
        typename Op::Image s = op.adjoint(r);
        const double rho_new = op.inner_x(s, s);
        if (rho_new == 0.0) break;
        const double beta = rho_new / rho;
        scal(beta, d);
        axpy(1.0, s, d);
        rho = rho_new;
    }
    return out;
}

}  // namespace pat
