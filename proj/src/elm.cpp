#include "elmlab/elm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "elmlab/nelder_mead.hpp"

namespace elmlab {

namespace {

constexpr double kLogitClamp = 60.0;
constexpr double kDiracEntropyBits = 0.05;
constexpr double kSignificantWeight = 1e-3;
constexpr double kCertificateStep = 0.01;
constexpr std::size_t kPolishRounds = 200;

double sigmoid(double u)
{
  u = std::clamp(u, -kLogitClamp, kLogitClamp);
  return u >= 0.0 ? 1.0 / (1.0 + std::exp(-u)) : std::exp(u) / (1.0 + std::exp(u));
}

double logit(double p) { return std::log(p) - std::log1p(-p); }

struct StartOutcome {
  std::vector<double> x;
  double value = std::numeric_limits<double>::infinity();
  bool converged = false;
  double entropy_bits = -1.0;  // computed lazily for tie-breaks
};

std::vector<double> smoothed_frequencies(std::span<const std::size_t> counts)
{
  std::vector<double> f(counts.size());
  double n = 0.0;
  for (std::size_t c : counts) n += static_cast<double>(c);
  for (std::size_t k = 0; k < counts.size(); ++k) {
    f[k] = (static_cast<double>(counts[k]) + 0.5) / (n + 0.5 * static_cast<double>(counts.size()));
  }
  return f;
}

std::vector<std::vector<double>> initial_points(const MixtureParametrization& param, std::span<const std::size_t> counts,
                                                std::size_t starts, SeededRng& rng)
{
  const std::size_t kk = param.classes();
  const std::size_t mm = param.components();
  const double cap = param.class_cap();
  const std::vector<double> freq = smoothed_frequencies(counts);
  const double freq_max = *std::max_element(freq.begin(), freq.end());
  auto clip = [cap](double a) { return std::clamp(a, 1e-6 * cap, 0.99 * cap); };

  std::vector<std::vector<double>> points;
  auto add = [&](std::vector<std::vector<double>> alphas, std::vector<double> weights) {
    for (auto& comp : alphas) {
      for (double& a : comp) a = clip(a);
    }
    points.push_back(param.encode(alphas, weights));
  };
  auto replicate = [mm](const std::vector<double>& alpha) { return std::vector<std::vector<double>>(mm, alpha); };
  const std::vector<double> equal(mm, 1.0 / static_cast<double>(mm));

  // Uniform.
  add(replicate(std::vector<double>(kk, 1.0)), equal);
  // Near-Dirac at the empirical frequency.
  {
    std::vector<double> alpha(kk);
    for (std::size_t k = 0; k < kk; ++k) alpha[k] = 0.5 * cap * freq[k] / freq_max;
    add(replicate(alpha), equal);
  }
  // Corner-leaning pairs.
  for (std::size_t variant = 0; variant < 2; ++variant) {
    std::vector<std::vector<double>> alphas;
    for (std::size_t m = 0; m < mm; ++m) {
      std::vector<double> alpha(kk, 1.0);
      const std::size_t corner = (variant == 0 ? m : m + 1) % kk;
      alpha[corner] = variant == 0 ? 5.0 : 20.0;
      alphas.push_back(std::move(alpha));
    }
    std::vector<double> w(mm, 0.3 / static_cast<double>(std::max<std::size_t>(mm - 1, 1)));
    w[0] = mm == 1 ? 1.0 : 0.7;
    add(std::move(alphas), std::move(w));
  }
  // Random: log-uniform concentration, mean scattered around the frequency.
  while (points.size() < starts) {
    std::vector<std::vector<double>> alphas;
    for (std::size_t m = 0; m < mm; ++m) {
      const double conc = std::exp(rng.uniform() * std::log(0.5 * cap * static_cast<double>(kk)));
      std::vector<double> shape(kk);
      for (std::size_t k = 0; k < kk; ++k) shape[k] = std::exp(rng.log_gamma_variate(1.0 + 10.0 * kk * freq[k]));
      const double s = std::accumulate(shape.begin(), shape.end(), 0.0);
      std::vector<double> alpha(kk);
      for (std::size_t k = 0; k < kk; ++k) alpha[k] = std::max(conc * shape[k] / s, 1e-3);
      alphas.push_back(std::move(alpha));
    }
    std::vector<double> w(mm);
    for (double& v : w) v = std::exp(2.0 * rng.uniform() - 1.0);
    const double ws = std::accumulate(w.begin(), w.end(), 0.0);
    for (double& v : w) v /= ws;
    add(std::move(alphas), std::move(w));
  }
  points.resize(starts);
  return points;
}

// Coordinate steps of 1% (at least 0.01 in absolute terms) until none improves
// by more than the tolerance.
void polish(const Objective& f, std::vector<double>& x, double& value, double tol, std::size_t& evaluations)
{
  for (std::size_t round = 0; round < kPolishRounds; ++round) {
    bool improved = false;
    for (std::size_t i = 0; i < x.size(); ++i) {
      for (double sign : {-1.0, 1.0}) {
        std::vector<double> trial = x;
        trial[i] += sign * kCertificateStep * std::max(std::abs(x[i]), 1.0);
        const double v = f(trial);
        ++evaluations;
        if (std::isfinite(v) && v < value - tol) {
          x = std::move(trial);
          value = v;
          improved = true;
        }
      }
    }
    if (!improved) return;
  }
}

}  // namespace

void OptimizerConfig::validate() const
{
  if (starts < 1) throw std::invalid_argument("OptimizerConfig: starts must be at least 1");
  if (max_iterations < 1) throw std::invalid_argument("OptimizerConfig: max_iterations must be at least 1");
  if (!(tolerance > 0.0)) throw std::invalid_argument("OptimizerConfig: tolerance must be positive");
  if (!(alpha_max > 0.0) || alpha_max > kAlphaMax) {
    throw std::invalid_argument("OptimizerConfig: alpha_max must lie in (0, 1e6]");
  }
  if (components < 1) throw std::invalid_argument("OptimizerConfig: need at least one component");
}

MixtureParametrization::MixtureParametrization(std::size_t classes, std::size_t components, double alpha_max)
    : classes_(classes), components_(components), alpha_max_(alpha_max)
{
  if (classes_ < 2 || components_ < 1) {
    throw std::invalid_argument("MixtureParametrization: need K >= 2 and M >= 1");
  }
}

Level2Distribution MixtureParametrization::decode(std::span<const double> x) const
{
  if (x.size() != dimension()) {
    throw std::invalid_argument("MixtureParametrization::decode: wrong parameter count");
  }
  const double cap = class_cap();
  std::vector<DirichletParams> comps;
  comps.reserve(components_);
  for (std::size_t m = 0; m < components_; ++m) {
    std::vector<double> alpha(classes_);
    for (std::size_t k = 0; k < classes_; ++k) alpha[k] = cap * sigmoid(x[m * classes_ + k]);
    comps.emplace_back(std::move(alpha));
  }
  if (components_ == 1) return comps.front();

  std::vector<double> logits(components_, 0.0);
  for (std::size_t m = 1; m < components_; ++m) {
    logits[m] = std::clamp(x[components_ * classes_ + m - 1], -kLogitClamp, kLogitClamp);
  }
  const double peak = *std::max_element(logits.begin(), logits.end());
  std::vector<double> w(components_);
  double total = 0.0;
  for (std::size_t m = 0; m < components_; ++m) total += (w[m] = std::exp(logits[m] - peak));
  for (double& v : w) v /= total;
  return DirichletMixture(std::move(w), std::move(comps));
}

std::vector<double> MixtureParametrization::encode(const std::vector<std::vector<double>>& alphas,
                                                   std::span<const double> weights) const
{
  if (alphas.size() != components_ || weights.size() != components_) {
    throw std::invalid_argument("MixtureParametrization::encode: wrong component count");
  }
  std::vector<double> x(dimension());
  const double cap = class_cap();
  for (std::size_t m = 0; m < components_; ++m) {
    if (alphas[m].size() != classes_) {
      throw std::invalid_argument("MixtureParametrization::encode: wrong class count");
    }
    for (std::size_t k = 0; k < classes_; ++k) {
      const double a = alphas[m][k];
      if (!(a > 0.0) || !(a < cap)) {
        throw std::invalid_argument("MixtureParametrization::encode: alpha outside (0, alpha_max / K)");
      }
      x[m * classes_ + k] = logit(a / cap);
    }
  }
  for (std::size_t m = 1; m < components_; ++m) {
    x[components_ * classes_ + m - 1] = std::log(weights[m]) - std::log(weights[0]);
  }
  return x;
}

bool dirac_check(const Level2Distribution& q, const SimplexGrid& grid, double alpha_max)
{
  if (q.is_dirac()) return true;
  if (quantized_entropy(q, grid) < kDiracEntropyBits) return true;

  const DirichletMixture mix = q.as_mixture();
  std::vector<double> weights;
  std::vector<DirichletParams> significant;
  for (std::size_t m = 0; m < mix.size(); ++m) {
    if (mix.weights()[m] > kSignificantWeight) {
      weights.push_back(mix.weights()[m]);
      significant.push_back(mix.components()[m]);
    }
  }
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  for (double& w : weights) w /= total;
  weights.back() = 1.0 - std::accumulate(weights.begin(), weights.end() - 1, 0.0);
  const std::vector<double> var = level2_variance(DirichletMixture(std::move(weights), std::move(significant)));
  const double max_var = *std::max_element(var.begin(), var.end());
  return max_var <= 0.25 / (0.1 * alpha_max + 1.0);
}

ElmFit fit_elm_counts(std::span<const std::size_t> counts, const LossConfig& config, const OptimizerConfig& opt,
                      SeededRng& rng, const SimplexGrid& grid)
{
  config.validate();
  opt.validate();
  const std::size_t kk = counts.size();
  if (grid.classes() != kk) {
    throw std::invalid_argument("fit_elm: quantization grid does not match the class count");
  }
  if (std::accumulate(counts.begin(), counts.end(), std::size_t{0}) == 0) {
    throw std::invalid_argument("fit_elm: empty label sample");
  }
  const MixtureParametrization param(kk, opt.components, opt.alpha_max);
  const Objective objective = [&](std::span<const double> x) {
    return empirical_l2_risk_from_counts(config, param.decode(x), counts);
  };

  NelderMeadOptions nm;
  nm.max_iterations = opt.max_iterations;
  nm.tolerance = opt.tolerance;

  std::vector<StartOutcome> outcomes;
  std::size_t iterations = 0;
  std::size_t evaluations = 0;
  for (auto& start : initial_points(param, counts, opt.starts, rng)) {
    const NelderMeadResult r = nelder_mead(objective, std::move(start), nm);
    iterations += r.iterations;
    evaluations += r.evaluations;
    outcomes.push_back({r.x, r.value, r.converged && std::isfinite(r.value)});
  }

  const bool any_converged =
      std::any_of(outcomes.begin(), outcomes.end(), [](const StartOutcome& s) { return s.converged; });
  if (!any_converged) {
    std::ostringstream msg;
    msg << "fit_elm: none of " << outcomes.size() << " starts converged within " << opt.max_iterations
        << " iterations; best objective ";
    double best = std::numeric_limits<double>::infinity();
    for (const auto& s : outcomes) best = std::min(best, s.value);
    msg << best;
    throw FitError(msg.str());
  }

  // Lowest objective wins; within the tolerance, lower quantized entropy.
  double best_value = std::numeric_limits<double>::infinity();
  for (const auto& s : outcomes) {
    if (s.converged) best_value = std::min(best_value, s.value);
  }
  std::size_t winner = outcomes.size();
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    auto& s = outcomes[i];
    if (!s.converged || s.value > best_value + opt.tolerance) continue;
    s.entropy_bits = quantized_entropy(param.decode(s.x), grid);
    if (winner == outcomes.size() || s.entropy_bits < outcomes[winner].entropy_bits) winner = i;
  }

  std::vector<double> x = outcomes[winner].x;
  double value = outcomes[winner].value;
  polish(objective, x, value, opt.tolerance, evaluations);

  const double agree_band = 1e-6 * std::max(1.0, std::abs(value));
  std::size_t agreeing = 0;
  for (const auto& s : outcomes) {
    if (s.converged && std::abs(s.value - value) <= agree_band) ++agreeing;
  }

  Level2Distribution q = param.decode(x);
  const double raw_entropy = quantized_entropy(q, grid);
  const bool dirac = dirac_check(q, grid, opt.alpha_max);
  ElmFit fit{q,
             empirical_l2_risk_from_counts(config, q, counts),
             dirac ? 0.0 : raw_entropy,
             raw_entropy,
             level2_mean(q),
             dirac,
             agreeing,
             iterations,
             x};
  return fit;
}

ElmFit fit_elm_counts(std::span<const std::size_t> counts, const LossConfig& config, const OptimizerConfig& opt,
                      SeededRng& rng)
{
  return fit_elm_counts(counts, config, opt, rng, build_simplex_grid(counts.size(), default_grid_resolution(counts.size())));
}

ElmFit fit_elm(std::span<const Label> labels, std::size_t classes, const LossConfig& config,
               const OptimizerConfig& opt, SeededRng& rng)
{
  if (labels.empty()) {
    throw std::invalid_argument("fit_elm: empty label sample");
  }
  const std::vector<std::size_t> counts = label_counts(labels, classes);
  return fit_elm_counts(counts, config, opt, rng);
}

}  // namespace elmlab
