#include "elmlab/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace elmlab {

namespace {

// Below this the asymptotic series is not accurate to double precision.
constexpr double kAsymptoticThreshold = 10.0;

double digamma_asymptotic(double x)
{
  // psi(x) ~ log x - 1/(2x) - sum_k B_{2k} / (2k x^{2k})
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  const double series =
      inv2 * (1.0 / 12.0 -
              inv2 * (1.0 / 120.0 -
                      inv2 * (1.0 / 252.0 -
                              inv2 * (1.0 / 240.0 -
                                      inv2 * (1.0 / 132.0 - inv2 * (691.0 / 32760.0 - inv2 / 12.0))))));
  return std::log(x) - 0.5 * inv - series;
}

}  // namespace

double digamma(double x)
{
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw std::domain_error("digamma: argument must be positive and finite, got " + std::to_string(x));
  }
  double shift = 0.0;
  while (x < kAsymptoticThreshold) {
    shift -= 1.0 / x;
    x += 1.0;
  }
  return shift + digamma_asymptotic(x);
}

double log_multivariate_beta(std::span<const double> alpha)
{
  double total = 0.0;
  double acc = 0.0;
  for (double a : alpha) {
    if (!(a > 0.0)) {
      throw std::domain_error("log_multivariate_beta: parameters must be positive");
    }
    acc += std::lgamma(a);
    total += a;
  }
  return acc - std::lgamma(total);
}

double log_sum_exp(std::span<const double> values)
{
  double peak = -std::numeric_limits<double>::infinity();
  for (double v : values) peak = std::max(peak, v);
  if (!std::isfinite(peak)) return peak;
  double acc = 0.0;
  for (double v : values) acc += std::exp(v - peak);
  return peak + std::log(acc);
}

double softplus(double x)
{
  if (x > 0.0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

}  // namespace elmlab
