#pragma once

#include <cmath>
#include <stdexcept>

#include "pat/linalg.hpp"

namespace pat {

/// Plain (unweighted) relative l2 error ||f - f_true|| / ||f_true||.
template <class T>
double rel_error(const T& f, const T& f_true) {
    const auto& fv = raw(f);
    const auto& tv = raw(f_true);
    if (fv.size() != tv.size()) throw std::invalid_argument("rel_error: size mismatch");
    double num = 0.0;
    double den = 0.0;
    for (size_t i = 0; i < fv.size(); ++i) {
        const double d = fv[i] - tv[i];
        num += d * d;
        den += tv[i] * tv[i];
    }
    if (den == 0.0) throw std::invalid_argument("rel_error: ground truth is zero");
    return std::sqrt(num / den);
}

/// Plain relative l2 residual ||W f - g|| / ||g||.
template <class Op>
double rel_residual(const Op& op, const typename Op::Image& f, const typename Op::Data& g) {
    typename Op::Data r = op.forward(f);
    const auto& rv = raw(r);
    const auto& gv = raw(g);
    double num = 0.0;
    double den = 0.0;
    for (size_t i = 0; i < rv.size(); ++i) {
        const double d = rv[i] - gv[i];
        num += d * d;
        den += gv[i] * gv[i];
    }
    if (den == 0.0) throw std::invalid_argument("rel_residual: data is zero");
    return std::sqrt(num / den);
}

}  // namespace pat
