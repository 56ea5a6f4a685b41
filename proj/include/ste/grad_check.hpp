#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "ste/tensor.hpp"

namespace ste {

/// Central-difference gradient of a scalar function of a Tensor. This is the
/// oracle every analytic gradient in the repo is validated against; it must
/// stay independent of the loss implementations.
template <typename F>
Tensor finite_diff_grad(F&& f, const Tensor& x, double eps = 1e-5) {
    if (!(eps > 0.0)) {
        throw std::invalid_argument("finite_diff_grad: eps must be positive");
    }
    Tensor grad(x.shape());
    Tensor probe = x;
    for (std::size_t i = 0; i < x.numel(); ++i) {
        const double saved = probe[i];
        probe[i] = saved + eps;
        const double fp = f(static_cast<const Tensor&>(probe));
        probe[i] = saved - eps;
        const double fm = f(static_cast<const Tensor&>(probe));
        probe[i] = saved;
        if (!std::isfinite(fp) || !std::isfinite(fm)) {
            throw std::runtime_error("finite_diff_grad: non-finite value at perturbed index " +
                                     std::to_string(i));
        }
        grad[i] = (fp - fm) / (2.0 * eps);
    }
    return grad;
}

/// Symmetric relative error between two gradients: |a-b|_2 / (|a|_2 + |b|_2).
/// Zero when both vanish.
inline double gradient_rel_error(const Tensor& a, const Tensor& b) {
    if (!a.same_shape(b)) {
        throw std::invalid_argument("gradient_rel_error: shape mismatch");
    }
    double diff2 = 0.0, na2 = 0.0, nb2 = 0.0;
    for (std::size_t i = 0; i < a.numel(); ++i) {
        const double d = a[i] - b[i];
        diff2 += d * d;
        na2 += a[i] * a[i];
        nb2 += b[i] * b[i];
    }
    const double denom = std::sqrt(na2) + std::sqrt(nb2);
    if (denom == 0.0) {
        return 0.0;
    }
    return std::sqrt(diff2) / denom;
}

} // namespace ste
