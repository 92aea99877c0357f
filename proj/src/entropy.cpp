#include "elmlab/entropy.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "elmlab/special_functions.hpp"

namespace elmlab {

namespace {

std::size_t binomial(std::size_t n, std::size_t r)
{
  if (r > n) return 0;
  r = std::min(r, n - r);
  std::size_t acc = 1;
  for (std::size_t i = 1; i <= r; ++i) acc = acc * (n - r + i) / i;
  return acc;
}

// Compositions of `total` into `parts` non-negative integers.
std::size_t composition_count(std::size_t total, std::size_t parts)
{
  if (parts == 0) return total == 0 ? 1 : 0;
  return binomial(total + parts - 1, parts - 1);
}

// ---------------------------------------------------------------------------
// Overlap correction for mixture entropies.
//
// For q = sum_i w_i p_i:
//   H(q) = sum_i w_i H(p_i) + H(w) - sum_i w_i E_{p_i}[log(1 + r_i)],
//   r_i(theta) = sum_{j != i} w_j p_j(theta) / (w_i p_i(theta)).
// The expectation is integrated in additive log-ratio coordinates
// t_k = log(theta_k / theta_{K-1}), where Dir(alpha) has density
// prod_k theta_k^alpha_k / B(alpha): smooth, unimodal, with mode
// log(alpha_k / alpha_{K-1}) and Laplace precision diag(a) - a a^T / alpha_0.

constexpr double kTailDrop = 36.0;      // nats below the mode
constexpr double kMaxLogRatio = 700.0;  // keeps exp(-|t|) representable
constexpr std::size_t kNodes1d = 192;
constexpr std::size_t kNodes2d = 32;
// Patch grids around a narrow component may need more nodes along an axis
// that is long compared with the component being integrated.
constexpr std::size_t kMaxPatchNodes = 160;

struct Component {
  std::vector<double> alpha;
  double log_beta = 0.0;
  double log_weight = 0.0;
};

// log theta from log-ratio coordinates (last coordinate implicit zero).
void log_theta_from_ratio(std::span<const double> t, std::span<double> out)
{
  double peak = 0.0;
  for (double v : t) peak = std::max(peak, v);
  double acc = std::exp(-peak);
  for (double v : t) acc += std::exp(v - peak);
  const double lse = peak + std::log(acc);
  for (std::size_t k = 0; k < t.size(); ++k) out[k] = t[k] - lse;
  out[t.size()] = -lse;
}

double ratio_log_density(const Component& c, std::span<const double> log_theta)
{
  double acc = -c.log_beta;
  for (std::size_t k = 0; k < log_theta.size(); ++k) acc += c.alpha[k] * log_theta[k];
  return acc;
}

double simplex_log_density(const Component& c, std::span<const double> log_theta)
{
  double acc = -c.log_beta;
  for (std::size_t k = 0; k < log_theta.size(); ++k) acc += (c.alpha[k] - 1.0) * log_theta[k];
  return acc;
}

struct Axis {
  std::array<double, 2> direction{};
  double scale = 1.0;
};

// Principal axes of the Laplace covariance in log-ratio space (dimension 1 or 2).
std::vector<Axis> laplace_axes(const std::vector<double>& alpha)
{
  const std::size_t d = alpha.size() - 1;
  const double total = std::accumulate(alpha.begin(), alpha.end(), 0.0);
  if (d == 1) {
    Axis a;
    a.direction = {1.0, 0.0};
    a.scale = std::sqrt(1.0 / alpha[0] + 1.0 / alpha[1]);
    return {a};
  }
  // Precision P = diag(a) - a a^T / alpha_0 restricted to the first two classes.
  const double p00 = alpha[0] - alpha[0] * alpha[0] / total;
  const double p11 = alpha[1] - alpha[1] * alpha[1] / total;
  const double p01 = -alpha[0] * alpha[1] / total;
  const double tr = p00 + p11;
  const double disc = std::sqrt(std::max(0.0, 0.25 * (p00 - p11) * (p00 - p11) + p01 * p01));
  const std::array<double, 2> eig = {0.5 * tr + disc, 0.5 * tr - disc};
  std::vector<Axis> axes(2);
  for (std::size_t j = 0; j < 2; ++j) {
    std::array<double, 2> v;
    if (std::abs(p01) > 1e-300 * (std::abs(p00) + std::abs(p11))) {
      v = {eig[j] - p11, p01};
    } else {
      v = (j == 0) == (p00 >= p11) ? std::array<double, 2>{1.0, 0.0} : std::array<double, 2>{0.0, 1.0};
    }
    const double norm = std::hypot(v[0], v[1]);
    axes[j].direction = {v[0] / norm, v[1] / norm};
    axes[j].scale = 1.0 / std::sqrt(std::max(eig[j], 1e-300));
  }
  return axes;
}

// Tensor grid around one component's mode. Nodes are sinh-graded along
// each principal axis: fine near the mode, coarse in the exponential tails.
struct Grid {
  std::vector<double> mode;
  std::vector<Axis> axes;
  std::array<std::size_t, 2> n{1, 1};
  std::array<double, 2> u_lo{}, du{};
  std::array<double, 2> z_lo{}, z_hi{};
};

double min_scale(const std::vector<Axis>& axes)
{
  double s = std::numeric_limits<double>::infinity();
  for (const Axis& a : axes) s = std::min(s, a.scale);
  return s;
}

void ratio_point(const Grid& g, std::span<const double> z, std::span<double> t)
{
  for (std::size_t k = 0; k < g.mode.size(); ++k) {
    double v = g.mode[k];
    for (std::size_t j = 0; j < g.axes.size(); ++j) v += z[j] * g.axes[j].scale * g.axes[j].direction[k];
    t[k] = std::clamp(v, -kMaxLogRatio, kMaxLogRatio);
  }
}

// resolution(j) gives the node count along principal axis j.
template <class Resolution>
Grid make_grid(const Component& c, Resolution resolution)
{
  Grid g;
  const std::size_t d = c.alpha.size() - 1;
  g.mode.resize(d);
  for (std::size_t k = 0; k < d; ++k) g.mode[k] = std::log(c.alpha[k]) - std::log(c.alpha[d]);
  g.axes = laplace_axes(c.alpha);

  std::vector<double> t(d), log_theta(d + 1);
  std::array<double, 2> z{};
  auto log_q = [&] {
    ratio_point(g, std::span<const double>(z.data(), d), t);
    log_theta_from_ratio(t, log_theta);
    return ratio_log_density(c, log_theta);
  };
  const double peak = log_q();
  for (std::size_t j = 0; j < d; ++j) {
    for (int side = 0; side < 2; ++side) {
      const double sign = side == 0 ? -1.0 : 1.0;
      double r = 4.0;
      while (true) {
        z = {0.0, 0.0};
        z[j] = sign * r;
        if (peak - log_q() > kTailDrop) break;
        if (r * g.axes[j].scale > 2.0 * kMaxLogRatio) break;
        r *= 1.5;
      }
      (side == 0 ? g.z_lo : g.z_hi)[j] = sign * r;
    }
    g.n[j] = resolution(j);
    g.u_lo[j] = std::asinh(g.z_lo[j]);
    g.du[j] = (std::asinh(g.z_hi[j]) - g.u_lo[j]) / static_cast<double>(g.n[j] - 1);
  }
  return g;
}

// Position and quadrature weight of node (i0, i1); the weight includes the
// sinh Jacobian and the axis scale (axes are orthonormal).
double grid_node(const Grid& g, std::size_t i0, std::size_t i1, std::span<double> t)
{
  std::array<double, 2> z{};
  double weight = 1.0;
  const std::array<std::size_t, 2> idx = {i0, i1};
  for (std::size_t j = 0; j < g.axes.size(); ++j) {
    const double u = g.u_lo[j] + static_cast<double>(idx[j]) * g.du[j];
    z[j] = std::sinh(u);
    double w = g.du[j] * std::cosh(u) * g.axes[j].scale;
    if (idx[j] == 0 || idx[j] + 1 == g.n[j]) w *= 0.5;
    weight *= w;
  }
  ratio_point(g, std::span<const double>(z.data(), g.axes.size()), t);
  return weight;
}

bool grid_contains(const Grid& g, std::span<const double> t)
{
  for (std::size_t j = 0; j < g.axes.size(); ++j) {
    double z = 0.0;
    for (std::size_t k = 0; k < g.mode.size(); ++k) z += (t[k] - g.mode[k]) * g.axes[j].direction[k];
    z /= g.axes[j].scale;
    if (z < g.z_lo[j] || z > g.z_hi[j]) return false;
  }
  return true;
}

// Expectation of log(1 + r_i) under component i.
//
// r_i varies on the scale of the narrowest component involved. Components
// narrower than i get their own patch grid; nodes of i's grid that fall
// inside a patch are skipped. At a patch boundary that component is kTailDrop
// nats below its peak, so the integrand is negligible there and the hard cut
// costs nothing.
double overlap_correction(const std::vector<Component>& comps, std::size_t i)
{
  const Component& self = comps[i];
  const std::size_t d = self.alpha.size() - 1;
  const std::size_t base = d == 1 ? kNodes1d : kNodes2d;
  const Grid own = make_grid(self, [&](std::size_t) { return base; });
  const double own_scale = min_scale(own.axes);

  std::vector<Grid> patches;
  std::vector<std::size_t> patch_of;
  for (std::size_t j = 0; j < comps.size(); ++j) {
    if (j == i) continue;
    const std::vector<Axis> axes = laplace_axes(comps[j].alpha);
    if (min_scale(axes) >= own_scale) continue;
    patches.push_back(make_grid(comps[j], [&](std::size_t a) {
      const double wanted = std::ceil(static_cast<double>(base) * axes[a].scale / own_scale);
      return std::clamp(static_cast<std::size_t>(std::min(wanted, 1e9)), base, std::max(base, kMaxPatchNodes));
    }));
    patch_of.push_back(j);
  }

  std::vector<double> t(d), log_theta(d + 1), others;
  others.reserve(comps.size());
  auto density_and_g = [&](double& p) {
    log_theta_from_ratio(t, log_theta);
    p = std::exp(ratio_log_density(self, log_theta));
    if (p == 0.0) return 0.0;
    const double self_term = self.log_weight + simplex_log_density(self, log_theta);
    others.clear();
    for (std::size_t j = 0; j < comps.size(); ++j) {
      if (j == i) continue;
      others.push_back(comps[j].log_weight + simplex_log_density(comps[j], log_theta));
    }
    return softplus(log_sum_exp(others) - self_term);
  };
  auto inside_patch = [&](std::size_t upto) {
    for (std::size_t p = 0; p < upto; ++p)
      if (grid_contains(patches[p], t)) return true;
    return false;
  };

  // Mass over the full own grid normalises away the grid's own error.
  double mass = 0.0;
  double acc = 0.0;
  for (std::size_t i1 = 0; i1 < own.n[1]; ++i1) {
    for (std::size_t i0 = 0; i0 < own.n[0]; ++i0) {
      const double w = grid_node(own, i0, i1, t);
      log_theta_from_ratio(t, log_theta);
      const double p = std::exp(ratio_log_density(self, log_theta));
      if (p == 0.0) continue;
      mass += w * p;
      if (inside_patch(patches.size())) continue;
      double dummy = 0.0;
      acc += w * p * density_and_g(dummy);
    }
  }
  for (std::size_t pi = 0; pi < patches.size(); ++pi) {
    const Grid& g = patches[pi];
    for (std::size_t i1 = 0; i1 < g.n[1]; ++i1) {
      for (std::size_t i0 = 0; i0 < g.n[0]; ++i0) {
        const double w = grid_node(g, i0, i1, t);
        if (inside_patch(pi)) continue;
        double p = 0.0;
        const double gv = density_and_g(p);
        acc += w * p * gv;
      }
    }
  }
  return mass > 0.0 ? acc / mass : 0.0;
}

double mixture_entropy_mc_fallback(const Level2Distribution& q)
{
  SeededRng rng(0x5eedULL, derive_stream({0xE7ULL, q.classes()}));
  return differential_entropy_mc(q, 100000, rng).estimate;
}

}  // namespace

std::size_t simplex_grid_size(std::size_t k, std::size_t m) { return composition_count(m, k); }

SimplexGrid build_simplex_grid(std::size_t k, std::size_t m)
{
  if (k != 2 && k != 3) {
    throw std::invalid_argument("build_simplex_grid: unsupported class count K=" + std::to_string(k));
  }
  if (m < 1) {
    throw std::invalid_argument("build_simplex_grid: resolution must be at least 1");
  }
  SimplexGrid grid;
  grid.classes_ = k;
  grid.resolution_ = m;
  const double inv = 1.0 / static_cast<double>(m);
  if (k == 2) {
    grid.points_.reserve(m + 1);
    grid.weights_.assign(m + 1, inv);
    grid.weights_.front() = grid.weights_.back() = 0.5 * inv;
    for (std::size_t i = 0; i <= m; ++i) {
      grid.points_.emplace_back(std::vector<double>{static_cast<double>(i) * inv, static_cast<double>(m - i) * inv});
    }
    return grid;
  }
  // K = 3: (i, j, m - i - j) lexicographically.
  grid.points_.reserve(simplex_grid_size(3, m));
  for (std::size_t i = 0; i <= m; ++i) {
    for (std::size_t j = 0; i + j <= m; ++j) {
      grid.points_.emplace_back(std::vector<double>{static_cast<double>(i) * inv, static_cast<double>(j) * inv,
                                                    static_cast<double>(m - i - j) * inv});
    }
  }
  // Each lattice triangle of area 1/(2 m^2) gives a third of its area to each vertex.
  grid.weights_.assign(grid.points_.size(), 0.0);
  auto index_of = [m](std::size_t i, std::size_t j) {
    // Points with first coordinate < i come first: sum_{r < i} (m - r + 1).
    return i * (m + 1) - i * (i - 1) / 2 + j;
  };
  const double share = inv * inv / 6.0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; i + j < m; ++j) {
      grid.weights_[index_of(i, j)] += share;
      grid.weights_[index_of(i + 1, j)] += share;
      grid.weights_[index_of(i, j + 1)] += share;
      if (i + j + 2 <= m) {
        grid.weights_[index_of(i + 1, j)] += share;
        grid.weights_[index_of(i, j + 1)] += share;
        grid.weights_[index_of(i + 1, j + 1)] += share;
      }
    }
  }
  return grid;
}

std::size_t default_grid_resolution(std::size_t k)
{
  if (k == 2) return 1000;
  if (k == 3) return 50;
  throw std::invalid_argument("default_grid_resolution: unsupported class count K=" + std::to_string(k));
}

std::size_t SimplexGrid::nearest_index(const SimplexPoint& theta) const
{
  if (theta.size() != classes_) {
    throw std::invalid_argument("SimplexGrid::nearest_index: dimension mismatch");
  }
  const auto m = static_cast<double>(resolution_);
  std::vector<std::size_t> counts(classes_);
  std::vector<std::pair<double, std::size_t>> remainders(classes_);
  std::size_t assigned = 0;
  for (std::size_t k = 0; k < classes_; ++k) {
    const double scaled = theta[k] * m;
    counts[k] = static_cast<std::size_t>(std::floor(scaled));
    remainders[k] = {scaled - std::floor(scaled), k};
    assigned += counts[k];
  }
  std::sort(remainders.begin(), remainders.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first > b.first : a.second < b.second;
  });
  for (std::size_t r = 0; assigned < resolution_ && r < classes_; ++r, ++assigned) ++counts[remainders[r].second];
  // Lexicographic rank of the composition.
  std::size_t rank = 0;
  std::size_t remaining = resolution_;
  for (std::size_t k = 0; k + 1 < classes_; ++k) {
    for (std::size_t c = 0; c < counts[k]; ++c) rank += composition_count(remaining - c, classes_ - k - 1);
    remaining -= counts[k];
  }
  return rank;
}

double dirichlet_differential_entropy(const DirichletParams& params)
{
  const double total = params.total();
  const auto k = static_cast<double>(params.size());
  double h = log_multivariate_beta(params) + (total - k) * digamma(total);
  for (double a : params.alpha()) h -= (a - 1.0) * digamma(a);
  return h;
}

double differential_entropy(const Level2Distribution& q)
{
  if (q.is_dirac()) {
    throw std::domain_error("differential_entropy: a Dirac measure has no density");
  }
  const DirichletMixture mix = q.as_mixture();
  std::vector<Component> comps;
  std::vector<double> entropies;
  for (std::size_t m = 0; m < mix.size(); ++m) {
    if (mix.weights()[m] <= 0.0) continue;
    const auto& c = mix.components()[m];
    comps.push_back({std::vector<double>(c.alpha().begin(), c.alpha().end()), log_multivariate_beta(c),
                     std::log(mix.weights()[m])});
    entropies.push_back(dirichlet_differential_entropy(c));
  }
  if (comps.size() == 1) return entropies.front();
  if (mix.classes() > 3) return mixture_entropy_mc_fallback(q);

  double within = 0.0;
  double weight_entropy = 0.0;
  double correction = 0.0;
  for (std::size_t i = 0; i < comps.size(); ++i) {
    const double w = std::exp(comps[i].log_weight);
    within += w * entropies[i];
    weight_entropy -= w * comps[i].log_weight;
    correction += w * overlap_correction(comps, i);
  }
  // Mixture entropy lies between the mean component entropy and that plus H(w).
  return within + std::clamp(weight_entropy - correction, 0.0, weight_entropy);
}

double differential_entropy_on_grid(const Level2Distribution& q, const SimplexGrid& grid)
{
  if (q.classes() != grid.classes()) {
    throw std::invalid_argument("differential_entropy_on_grid: dimension mismatch");
  }
  double h = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double lp = level2_log_pdf(q, grid[i]);
    const double p = std::exp(lp);
    if (p > 0.0) h -= grid.quadrature_weights()[i] * p * lp;
  }
  return h;
}

MonteCarloEstimate differential_entropy_mc(const Level2Distribution& q, std::size_t n, SeededRng& rng)
{
  if (n < 2) {
    throw std::invalid_argument("differential_entropy_mc: need at least two samples");
  }
  double mean = 0.0;
  double m2 = 0.0;
  for (std::size_t s = 0; s < n; ++s) {
    const double v = -level2_log_pdf(q, level2_sample(q, rng));
    const double delta = v - mean;
    mean += delta / static_cast<double>(s + 1);
    m2 += delta * (v - mean);
  }
  const double var = m2 / static_cast<double>(n - 1);
  return {mean, std::sqrt(var / static_cast<double>(n))};
}

std::vector<double> quantized_masses(const Level2Distribution& q, const SimplexGrid& grid)
{
  if (q.classes() != grid.classes()) {
    throw std::invalid_argument("quantized_masses: dimension mismatch");
  }
  std::vector<double> masses(grid.size(), 0.0);
  if (const Dirac* d = q.as_dirac()) {
    masses[grid.nearest_index(d->point)] = 1.0;
    return masses;
  }
  // Boundary points are read a quarter bin inside: a component with some
  // alpha_k < 1 is infinite on the face theta_k = 0.
  std::vector<SimplexPoint> nodes;
  nodes.reserve(grid.size());
  const double inset = 0.25 / static_cast<double>(grid.resolution());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    std::vector<double> c(grid[i].probs().begin(), grid[i].probs().end());
    if (std::find(c.begin(), c.end(), 0.0) == c.end()) {
      nodes.push_back(grid[i]);
      continue;
    }
    double total = 0.0;
    for (double& v : c) total += (v = std::max(v, inset));
    for (double& v : c) v /= total;
    nodes.emplace_back(std::move(c));
  }
  // Each component is normalised on its own so a negligible weight stays
  // negligible however peaked the component is.
  const DirichletMixture mix = q.as_mixture();
  std::vector<double> logs(grid.size());
  for (std::size_t m = 0; m < mix.components().size(); ++m) {
    const double w = mix.weights()[m];
    if (!(w > 0.0)) continue;
    for (std::size_t i = 0; i < nodes.size(); ++i) logs[i] = dirichlet_log_pdf(mix.components()[m], nodes[i]);
    const double norm = log_sum_exp(logs);
    for (std::size_t i = 0; i < nodes.size(); ++i) masses[i] += w * std::exp(logs[i] - norm);
  }
  return masses;
}

double shannon_entropy_bits(std::span<const double> probs)
{
  double h = 0.0;
  for (double p : probs) {
    if (p > 0.0) h -= p * std::log2(p);
  }
  return std::max(h, 0.0);
}

double quantized_entropy(const Level2Distribution& q, const SimplexGrid& grid)
{
  return shannon_entropy_bits(quantized_masses(q, grid));
}

}  // namespace elmlab
