#include "elmlab/level2_losses.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "elmlab/special_functions.hpp"

namespace elmlab {

std::string_view to_string(RegularizerScope scope)
{
  return scope == RegularizerScope::PerLabel ? "per_label" : "per_sample";
}

RegularizerScope regularizer_scope_from_string(std::string_view name)
{
  if (name == "per_label") return RegularizerScope::PerLabel;
  if (name == "per_sample") return RegularizerScope::PerSample;
  throw std::invalid_argument("unknown regularizer scope '" + std::string(name) + "'");
}

void LossConfig::validate() const
{
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("LossConfig: lambda must be finite and non-negative");
  }
  if (regularizer.type == RegularizerKind::Type::KLToDirichlet && !regularizer.prior) {
    throw std::invalid_argument("LossConfig: KL regularizer needs a Dirichlet prior");
  }
}

double expected_l1_dirichlet_closed(Level1LossKind kind, const DirichletParams& alpha, Label y)
{
  if (y.index >= alpha.size()) {
    throw std::invalid_argument("expected_l1_dirichlet_closed: label out of range");
  }
  const double total = alpha.total();
  switch (kind) {
    case Level1LossKind::LogLoss:
      return digamma(total) - digamma(alpha[y.index]);
    case Level1LossKind::Brier: {
      double acc = 0.0;
      for (std::size_t k = 0; k < alpha.size(); ++k) {
        const double bias = alpha[k] / total - (k == y.index ? 1.0 : 0.0);
        acc += alpha.variance(k) + bias * bias;
      }
      return acc;
    }
    case Level1LossKind::BinaryBrier: {
      if (alpha.size() != 2) {
        throw std::invalid_argument("expected_l1_dirichlet_closed: the binary Brier score needs K = 2");
      }
      const double bias = alpha[1] / total - (y.index == 1 ? 1.0 : 0.0);
      return alpha.variance(1) + bias * bias;
    }
  }
  throw std::invalid_argument("expected_l1_dirichlet_closed: unknown loss kind");
}

double expected_l1(Level1LossKind kind, const Level2Distribution& q, Label y)
{
  if (const Dirac* d = q.as_dirac()) return level1_loss(kind, d->point, y);
  const DirichletMixture mix = q.as_mixture();
  double acc = 0.0;
  for (std::size_t m = 0; m < mix.size(); ++m) {
    if (mix.weights()[m] <= 0.0) continue;
    acc += mix.weights()[m] * expected_l1_dirichlet_closed(kind, mix.components()[m], y);
  }
  return acc;
}

MonteCarloEstimate expected_l1_mc(Level1LossKind kind, const Level2Distribution& q, Label y, std::size_t n_samples,
                                  SeededRng& rng)
{
  if (n_samples < 100) {
    throw std::invalid_argument("expected_l1_mc: need at least 100 samples");
  }
  if (const Dirac* d = q.as_dirac()) return {level1_loss(kind, d->point, y), 0.0};
  double mean = 0.0;
  double m2 = 0.0;
  for (std::size_t s = 0; s < n_samples; ++s) {
    const double v = level1_loss(kind, level2_sample(q, rng), y);
    const double delta = v - mean;
    mean += delta / static_cast<double>(s + 1);
    m2 += delta * (v - mean);
  }
  return {mean, std::sqrt(m2 / static_cast<double>(n_samples - 1) / static_cast<double>(n_samples))};
}

double regularizer_value(const RegularizerKind& reg, const Level2Distribution& q)
{
  if (reg.type == RegularizerKind::Type::None) return 0.0;
  const Level2Distribution density = q.is_dirac() ? Level2Distribution(dirac_proxy(*q.as_dirac())) : q;
  if (reg.type == RegularizerKind::Type::NegEntropyUniformPrior) return -differential_entropy(density);

  const DirichletParams& prior = reg.prior.value();
  if (prior.size() != density.classes()) {
    throw std::invalid_argument("regularizer_value: prior dimension mismatch");
  }
  if (const auto* single = std::get_if<DirichletParams>(&density.variant())) return kl_dirichlet(*single, prior);
  // KL(Q || P0) = -H(Q) - E_Q[log p0(theta)]
  const DirichletMixture mix = density.as_mixture();
  double cross = 0.0;
  for (std::size_t m = 0; m < mix.size(); ++m) {
    if (mix.weights()[m] <= 0.0) continue;
    double e = -log_multivariate_beta(prior);
    for (std::size_t k = 0; k < prior.size(); ++k) {
      e += (prior[k] - 1.0) * expected_log_theta(mix.components()[m], k);
    }
    cross += mix.weights()[m] * e;
  }
  return -differential_entropy(density) - cross;
}

double level2_loss(const LossConfig& config, const Level2Distribution& q, Label y)
{
  config.validate();
  double loss = expected_l1(config.level1, q, y);
  if (config.lambda > 0.0) loss += config.lambda * regularizer_value(config.regularizer, q);
  return loss;
}

double empirical_l2_risk_from_counts(const LossConfig& config, const Level2Distribution& q,
                                     std::span<const std::size_t> counts)
{
  config.validate();
  if (counts.size() != q.classes()) {
    throw std::invalid_argument("empirical_l2_risk: label counts do not match the class count");
  }
  std::size_t n = 0;
  for (std::size_t c : counts) n += c;
  if (n == 0) {
    throw std::invalid_argument("empirical_l2_risk: empty label sample");
  }
  double data_term = 0.0;
  for (std::size_t y = 0; y < counts.size(); ++y) {
    if (counts[y] == 0) continue;
    data_term += static_cast<double>(counts[y]) * expected_l1(config.level1, q, Label{y});
  }
  data_term /= static_cast<double>(n);
  if (config.lambda == 0.0 || config.regularizer.type == RegularizerKind::Type::None) return data_term;
  const double weight =
      config.scope == RegularizerScope::PerLabel ? config.lambda : config.lambda / static_cast<double>(n);
  return data_term + weight * regularizer_value(config.regularizer, q);
}

double empirical_l2_risk(const LossConfig& config, const Level2Distribution& q, std::span<const Label> labels)
{
  if (labels.empty()) {
    throw std::invalid_argument("empirical_l2_risk: empty label sample");
  }
  const std::vector<std::size_t> counts = label_counts(labels, q.classes());
  return empirical_l2_risk_from_counts(config, q, counts);
}

double expected_l2_risk_under_truth(const LossConfig& config, const Level2Distribution& q,
                                    const SimplexPoint& theta_star)
{
  config.validate();
  if (theta_star.size() != q.classes()) {
    throw std::invalid_argument("expected_l2_risk_under_truth: dimension mismatch");
  }
  double acc = 0.0;
  for (std::size_t y = 0; y < theta_star.size(); ++y) {
    if (theta_star[y] == 0.0) continue;
    acc += theta_star[y] * expected_l1(config.level1, q, Label{y});
  }
  if (config.lambda > 0.0) acc += config.lambda * regularizer_value(config.regularizer, q);
  return acc;
}

double jensen_gap(Level1LossKind kind, const Level2Distribution& q, Label y)
{
  if (q.is_dirac()) return 0.0;
  return expected_l1(kind, q, y) - level1_loss(kind, level2_mean(q), y);
}

GibbsPosterior gibbs_posterior(Level1LossKind kind, Label y, const DirichletParams& prior, std::size_t grid_resolution)
{
  GibbsPosterior post{build_simplex_grid(prior.size(), grid_resolution), {}, 0.0};
  const auto& weights = post.grid.quadrature_weights();
  post.density.resize(post.grid.size());
  for (std::size_t i = 0; i < post.grid.size(); ++i) {
    const SimplexPoint& theta = post.grid[i];
    post.density[i] = std::exp(dirichlet_log_pdf(prior, theta) - level1_loss(kind, theta, y));
    post.normalizer += weights[i] * post.density[i];
  }
  if (!(post.normalizer > 0.0) || !std::isfinite(post.normalizer)) {
    throw std::runtime_error("gibbs_posterior: normalising constant is not in (0, inf)");
  }
  for (double& d : post.density) d /= post.normalizer;
  return post;
}

}  // namespace elmlab
