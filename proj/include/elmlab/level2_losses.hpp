#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "elmlab/dirichlet.hpp"
#include "elmlab/entropy.hpp"
#include "elmlab/level1_losses.hpp"
#include "elmlab/level2_distribution.hpp"
#include "elmlab/rng.hpp"

namespace elmlab {

/// Regularizer on the level-2 prediction.
///   None                   : no penalty (expected level-1 loss only)
///   NegEntropyUniformPrior : -H(Q); equals KL(Q || uniform) up to log((K-1)!)
///   KLToDirichlet          : KL(Q || Dir(prior))
struct RegularizerKind {
  enum class Type { None, NegEntropyUniformPrior, KLToDirichlet };

  Type type = Type::None;
  std::optional<DirichletParams> prior;  // set iff type == KLToDirichlet

  static RegularizerKind none() { return {}; }
  static RegularizerKind neg_entropy() { return {Type::NegEntropyUniformPrior, std::nullopt}; }
  static RegularizerKind kl_to(DirichletParams prior) { return {Type::KLToDirichlet, std::move(prior)}; }

  friend bool operator==(const RegularizerKind&, const RegularizerKind&) = default;
};

/// How often the regularizer enters an empirical risk over N labels.
///   PerLabel  : every label's loss carries lambda * R(Q), so the risk is
///               mean_n L_E(Q, y_n) + lambda R(Q).
///   PerSample : lambda * R(Q) is charged once for the whole sample, i.e.
///               (1/N) [sum_n L_E(Q, y_n) + lambda R(Q)], the Gibbs-posterior
///               objective over the full data set.
enum class RegularizerScope { PerLabel, PerSample };

std::string_view to_string(RegularizerScope scope);
RegularizerScope regularizer_scope_from_string(std::string_view name);

struct LossConfig {
  Level1LossKind level1 = Level1LossKind::Brier;
  RegularizerKind regularizer;
  double lambda = 0.0;
  RegularizerScope scope = RegularizerScope::PerSample;

  /// Throws std::invalid_argument for negative or non-finite lambda.
  void validate() const;

  friend bool operator==(const LossConfig&, const LossConfig&) = default;
};

/// E_{theta ~ Dir(alpha)} L1(theta, y) in closed form.
///   LogLoss : psi(alpha_0) - psi(alpha_y)
///   Brier   : sum_k Var theta_k + (E theta_k - [y == k])^2
double expected_l1_dirichlet_closed(Level1LossKind kind, const DirichletParams& alpha, Label y);

/// E_{theta ~ Q} L1(theta, y): weighted closed forms for mixtures; L1 at the
/// point for a Dirac.
double expected_l1(Level1LossKind kind, const Level2Distribution& q, Label y);

/// Monte Carlo estimate of E_{theta ~ Q} L1(theta, y). n_samples >= 100.
MonteCarloEstimate expected_l1_mc(Level1LossKind kind, const Level2Distribution& q, Label y, std::size_t n_samples,
                                  SeededRng& rng);

/// R(Q) for the configured regularizer (without lambda). A Dirac is evaluated
/// through its capped-Dirichlet proxy, so the value is finite.
double regularizer_value(const RegularizerKind& reg, const Level2Distribution& q);

/// L2(Q, y) = E_Q L1(theta, y) + lambda R(Q).
double level2_loss(const LossConfig& config, const Level2Distribution& q, Label y);

/// Empirical level-2 risk over a label sample, evaluated from label counts.
/// Throws std::invalid_argument for an empty sample.
double empirical_l2_risk(const LossConfig& config, const Level2Distribution& q, std::span<const Label> labels);
double empirical_l2_risk_from_counts(const LossConfig& config, const Level2Distribution& q,
                                     std::span<const std::size_t> counts);

/// sum_y theta*(y) L2(Q, y).
double expected_l2_risk_under_truth(const LossConfig& config, const Level2Distribution& q,
                                    const SimplexPoint& theta_star);

/// E_Q L1(theta, y) - L1(E_Q theta, y); non-negative for convex losses.
double jensen_gap(Level1LossKind kind, const Level2Distribution& q, Label y);

/// Gibbs posterior exp(-L1(theta, y)) Q0(theta) / Z on a simplex grid.
struct GibbsPosterior {
  SimplexGrid grid;
  std::vector<double> density;  // normalised w.r.t. grid.quadrature_weights()
  double normalizer = 0.0;      // Z
};

/// K in {2, 3}. Throws std::runtime_error if Z is not in (0, inf).
GibbsPosterior gibbs_posterior(Level1LossKind kind, Label y, const DirichletParams& prior, std::size_t grid_resolution);

}  // namespace elmlab
