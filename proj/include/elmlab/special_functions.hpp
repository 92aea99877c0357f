#pragma once

#include <span>

namespace elmlab {

/// Digamma function psi(x) = d/dx log Gamma(x) for x > 0.
/// Throws std::domain_error for non-positive or non-finite arguments.
double digamma(double x);

/// log B(alpha) = sum_k log Gamma(alpha_k) - log Gamma(sum_k alpha_k).
double log_multivariate_beta(std::span<const double> alpha);

/// Numerically stable log(sum_i exp(v_i)); -inf for an empty or all -inf input.
double log_sum_exp(std::span<const double> values);

/// log(1 + exp(x)) without overflow.
double softplus(double x);

}  // namespace elmlab
