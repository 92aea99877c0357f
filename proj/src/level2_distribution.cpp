#include "elmlab/level2_distribution.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "elmlab/special_functions.hpp"

namespace elmlab {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

DirichletMixture::DirichletMixture(std::vector<double> weights, std::vector<DirichletParams> components)
    : weights_(std::move(weights)), components_(std::move(components))
{
  if (components_.empty()) {
    throw std::invalid_argument("DirichletMixture: need at least one component");
  }
  if (weights_.size() != components_.size()) {
    throw std::invalid_argument("DirichletMixture: weight count does not match component count");
  }
  double total = 0.0;
  for (double w : weights_) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw std::invalid_argument("DirichletMixture: weights must be finite and non-negative");
    }
    total += w;
  }
  if (std::abs(total - 1.0) > kSimplexTolerance) {
    throw std::invalid_argument("DirichletMixture: weights do not sum to one");
  }
  for (const auto& c : components_) {
    if (c.size() != components_.front().size()) {
      throw std::invalid_argument("DirichletMixture: components disagree on the class count");
    }
  }
}

std::size_t Level2Distribution::classes() const
{
  return std::visit(Overloaded{[](const DirichletParams& d) { return d.size(); },
                               [](const DirichletMixture& m) { return m.classes(); },
                               [](const Dirac& d) { return d.point.size(); }},
                    value_);
}

DirichletMixture Level2Distribution::as_mixture() const
{
  return std::visit(Overloaded{[](const DirichletParams& d) { return DirichletMixture({1.0}, {d}); },
                               [](const DirichletMixture& m) { return m; },
                               [](const Dirac&) -> DirichletMixture {
                                 throw std::domain_error("no density: Dirac level-2 distribution");
                               }},
                    value_);
}

double level2_log_pdf(const Level2Distribution& q, const SimplexPoint& theta)
{
  const DirichletMixture mix = q.as_mixture();
  std::vector<double> terms;
  terms.reserve(mix.size());
  for (std::size_t m = 0; m < mix.size(); ++m) {
    if (mix.weights()[m] <= 0.0) continue;
    terms.push_back(std::log(mix.weights()[m]) + dirichlet_log_pdf(mix.components()[m], theta));
  }
  return log_sum_exp(terms);
}

double level2_pdf(const Level2Distribution& q, const SimplexPoint& theta)
{
  const double lp = level2_log_pdf(q, theta);
  if (lp > std::log(std::numeric_limits<double>::max())) {
    return std::numeric_limits<double>::infinity();
  }
  return std::exp(lp);
}

SimplexPoint level2_mean(const Level2Distribution& q)
{
  if (const Dirac* d = q.as_dirac()) return d->point;
  const DirichletMixture mix = q.as_mixture();
  std::vector<double> mean(mix.classes(), 0.0);
  for (std::size_t m = 0; m < mix.size(); ++m) {
    const auto& c = mix.components()[m];
    for (std::size_t k = 0; k < mean.size(); ++k) mean[k] += mix.weights()[m] * c[k] / c.total();
  }
  return SimplexPoint::normalized(std::move(mean));
}

std::vector<double> level2_variance(const Level2Distribution& q)
{
  if (const Dirac* d = q.as_dirac()) return std::vector<double>(d->point.size(), 0.0);
  const DirichletMixture mix = q.as_mixture();
  const SimplexPoint mean = level2_mean(q);
  std::vector<double> var(mix.classes(), 0.0);
  for (std::size_t m = 0; m < mix.size(); ++m) {
    const auto& c = mix.components()[m];
    for (std::size_t k = 0; k < var.size(); ++k) {
      const double mk = c[k] / c.total();
      var[k] += mix.weights()[m] * (c.variance(k) + (mk - mean[k]) * (mk - mean[k]));
    }
  }
  return var;
}

SimplexPoint dirichlet_sample(const DirichletParams& params, SeededRng& rng)
{
  std::vector<double> logs(params.size());
  for (std::size_t k = 0; k < params.size(); ++k) logs[k] = rng.log_gamma_variate(params[k]);
  const double norm = log_sum_exp(logs);
  for (double& v : logs) v = std::exp(v - norm);
  return SimplexPoint::normalized(std::move(logs));
}

SimplexPoint level2_sample(const Level2Distribution& q, SeededRng& rng)
{
  return std::visit(Overloaded{[&](const DirichletParams& d) { return dirichlet_sample(d, rng); },
                               [&](const DirichletMixture& m) {
                                 const double u = rng.uniform();
                                 double acc = 0.0;
                                 std::size_t pick = m.size() - 1;
                                 for (std::size_t i = 0; i < m.size(); ++i) {
                                   acc += m.weights()[i];
                                   if (u < acc) {
                                     pick = i;
                                     break;
                                   }
                                 }
                                 return dirichlet_sample(m.components()[pick], rng);
                               },
                               [](const Dirac& d) { return d.point; }},
                    q.variant());
}

Label categorical_sample(const SimplexPoint& theta, SeededRng& rng)
{
  const double u = rng.uniform();
  double acc = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t k = 0; k < theta.size(); ++k) {
    if (theta[k] > 0.0) last_positive = k;
    acc += theta[k];
    if (u < acc) return Label{k};
  }
  // u landed in the rounding gap above the cumulative sum.
  return Label{last_positive};
}

}  // namespace elmlab

namespace elmlab {

DirichletParams dirac_proxy(const Dirac& dirac)
{
  constexpr double kFloorShare = 1e-9;
  const std::size_t k = dirac.point.size();
  std::vector<double> alpha(k);
  const double scale = 1.0 - static_cast<double>(k) * kFloorShare;
  for (std::size_t i = 0; i < k; ++i) alpha[i] = kAlphaMax * (dirac.point[i] * scale + kFloorShare);
  // Guard the cap against rounding in the sum.
  double total = 0.0;
  for (double a : alpha) total += a;
  if (total > kAlphaMax) {
    for (double& a : alpha) a *= kAlphaMax / total;
  }
  return DirichletParams(std::move(alpha));
}

}  // namespace elmlab
