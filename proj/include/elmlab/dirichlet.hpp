#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "elmlab/simplex.hpp"

namespace elmlab {

/// Concentration cap: total pseudocount of any representable Dirichlet.
/// Point masses are approximated by Dirichlets at (or near) this cap.
inline constexpr double kAlphaMax = 1e6;

/// Parameters of Dir(alpha). All alpha_k > 0 and sum(alpha) <= kAlphaMax.
class DirichletParams {
public:
  explicit DirichletParams(std::vector<double> alpha);

  /// Dir(c, ..., c) on K classes.
  static DirichletParams symmetric(std::size_t k, double c);

  std::size_t size() const { return alpha_.size(); }
  double operator[](std::size_t i) const { return alpha_[i]; }
  std::span<const double> alpha() const { return alpha_; }

  /// alpha_0 = sum_k alpha_k.
  double total() const { return total_; }

  /// E[theta_k] = alpha_k / alpha_0.
  SimplexPoint mean() const;

  /// Var[theta_k] = alpha_k (alpha_0 - alpha_k) / (alpha_0^2 (alpha_0 + 1)).
  double variance(std::size_t k) const;

  friend bool operator==(const DirichletParams& a, const DirichletParams& b) { return a.alpha_ == b.alpha_; }

private:
  std::vector<double> alpha_;
  double total_ = 0.0;
};

/// log B(alpha).
double log_multivariate_beta(const DirichletParams& params);

/// Log density of Dir(alpha) at theta, with each coordinate clamped into
/// [1e-12, 1 - 1e-12]. Finite for every input.
double dirichlet_log_pdf(const DirichletParams& params, const SimplexPoint& theta);

/// KL(Dir(q) || Dir(prior)) in nats.
double kl_dirichlet(const DirichletParams& q, const DirichletParams& prior);

/// E_{Dir(alpha)}[log theta_k] = psi(alpha_k) - psi(alpha_0).
double expected_log_theta(const DirichletParams& params, std::size_t k);

}  // namespace elmlab
