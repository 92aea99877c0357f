#include "elmlab/simplex.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace elmlab {

SimplexPoint::SimplexPoint(std::vector<double> probs) : probs_(std::move(probs))
{
  if (probs_.size() < 2) {
    throw std::invalid_argument("SimplexPoint: need at least two classes");
  }
  double total = 0.0;
  for (double p : probs_) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw std::invalid_argument("SimplexPoint: entries must be finite and non-negative");
    }
    total += p;
  }
  if (std::abs(total - 1.0) > kSimplexTolerance) {
    throw std::invalid_argument("SimplexPoint: entries sum to " + std::to_string(total) + ", not 1");
  }
}

SimplexPoint SimplexPoint::normalized(std::vector<double> weights)
{
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw std::invalid_argument("SimplexPoint::normalized: weights must be finite and non-negative");
    }
    total += w;
  }
  if (!(total > 0.0)) {
    throw std::invalid_argument("SimplexPoint::normalized: weights sum to zero");
  }
  for (double& w : weights) w /= total;
  return SimplexPoint(std::move(weights));
}

SimplexPoint SimplexPoint::uniform(std::size_t k)
{
  return SimplexPoint(std::vector<double>(k, 1.0 / static_cast<double>(k)));
}

std::vector<std::size_t> label_counts(std::span<const Label> labels, std::size_t k)
{
  std::vector<std::size_t> counts(k, 0);
  for (const Label& y : labels) {
    if (y.index >= k) {
      throw std::invalid_argument("label_counts: label " + std::to_string(y.index) + " out of range for K=" +
                                  std::to_string(k));
    }
    ++counts[y.index];
  }
  return counts;
}

}  // namespace elmlab
