#pragma once

#include <cstddef>
#include <variant>
#include <vector>

#include "elmlab/dirichlet.hpp"
#include "elmlab/rng.hpp"
#include "elmlab/simplex.hpp"

namespace elmlab {

/// Finite mixture of Dirichlets sharing the class count K.
class DirichletMixture {
public:
  DirichletMixture(std::vector<double> weights, std::vector<DirichletParams> components);

  std::size_t size() const { return components_.size(); }
  std::size_t classes() const { return components_.front().size(); }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<DirichletParams>& components() const { return components_; }

  friend bool operator==(const DirichletMixture&, const DirichletMixture&) = default;

private:
  std::vector<double> weights_;
  std::vector<DirichletParams> components_;
};

/// Point mass delta_theta.
struct Dirac {
  SimplexPoint point;

  friend bool operator==(const Dirac&, const Dirac&) = default;
};

/// A distribution over the probability simplex.
class Level2Distribution {
public:
  using Variant = std::variant<DirichletParams, DirichletMixture, Dirac>;

  Level2Distribution(DirichletParams dirichlet) : value_(std::move(dirichlet)) {}
  Level2Distribution(DirichletMixture mixture) : value_(std::move(mixture)) {}
  Level2Distribution(Dirac dirac) : value_(std::move(dirac)) {}

  const Variant& variant() const { return value_; }
  std::size_t classes() const;

  bool is_dirac() const { return std::holds_alternative<Dirac>(value_); }
  const Dirac* as_dirac() const { return std::get_if<Dirac>(&value_); }

  /// Mixture view: a single Dirichlet has one component with weight 1.
  /// Throws std::domain_error for the Dirac variant.
  DirichletMixture as_mixture() const;

  friend bool operator==(const Level2Distribution&, const Level2Distribution&) = default;

private:
  Variant value_;
};

/// Density at theta (coordinates clamped into [1e-12, 1 - 1e-12]).
/// Overflow is reported as +infinity. Throws std::domain_error("no density")
/// for the Dirac variant.
double level2_pdf(const Level2Distribution& q, const SimplexPoint& theta);

/// Log density, same conventions as level2_pdf.
double level2_log_pdf(const Level2Distribution& q, const SimplexPoint& theta);

/// Expected level-1 distribution E_{theta ~ Q}[theta].
SimplexPoint level2_mean(const Level2Distribution& q);

/// Var_{theta ~ Q}[theta_k] for every k, including between-component spread.
std::vector<double> level2_variance(const Level2Distribution& q);

/// One exact draw from Q.
SimplexPoint level2_sample(const Level2Distribution& q, SeededRng& rng);

/// Draw from Dir(alpha) via normalised log-gamma variates.
SimplexPoint dirichlet_sample(const DirichletParams& params, SeededRng& rng);

/// Draw y ~ Cat(theta).
Label categorical_sample(const SimplexPoint& theta, SeededRng& rng);

}  // namespace elmlab

namespace elmlab {

/// Capped Dirichlet standing in for a point mass: alpha = kAlphaMax * theta,
/// with zero coordinates lifted to a 1e-9 share so every alpha_k stays positive.
DirichletParams dirac_proxy(const Dirac& dirac);

}  // namespace elmlab
