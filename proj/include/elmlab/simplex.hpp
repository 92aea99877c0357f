#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace elmlab {

/// Tolerance on sum(probs) == 1 for simplex points and mixture weights.
inline constexpr double kSimplexTolerance = 1e-12;

/// A categorical distribution over K >= 2 classes.
class SimplexPoint {
public:
  /// Throws std::invalid_argument unless K >= 2, all entries >= 0 and the
  /// entries sum to one within kSimplexTolerance.
  explicit SimplexPoint(std::vector<double> probs);

  /// Rescales non-negative finite weights onto the simplex.
  static SimplexPoint normalized(std::vector<double> weights);

  /// (1/K, ..., 1/K).
  static SimplexPoint uniform(std::size_t k);

  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }
  std::span<const double> probs() const { return probs_; }

  friend bool operator==(const SimplexPoint&, const SimplexPoint&) = default;

private:
  std::vector<double> probs_;
};

/// Class index y in [0, K).
struct Label {
  std::size_t index = 0;

  friend bool operator==(const Label&, const Label&) = default;
};

/// Per-class label counts; the sufficient statistic of an i.i.d. label sample.
std::vector<std::size_t> label_counts(std::span<const Label> labels, std::size_t k);

}  // namespace elmlab
