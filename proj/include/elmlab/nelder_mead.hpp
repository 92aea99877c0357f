#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace elmlab {

struct NelderMeadOptions {
  std::size_t max_iterations = 2000;
  /// Converged when max - min of the simplex values drops to this.
  double tolerance = 1e-9;
  /// Edge length of the initial simplex along each coordinate.
  double initial_step = 1.0;
  /// Fresh simplices built around the incumbent after convergence, to catch
  /// collapses onto a non-stationary point.
  std::size_t restarts = 2;
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  std::size_t iterations = 0;
  std::size_t evaluations = 0;
  bool converged = false;
};

using Objective = std::function<double(std::span<const double>)>;

/// Unconstrained derivative-free minimisation by simplex reflection.
/// Non-finite objective values are treated as +infinity.
NelderMeadResult nelder_mead(const Objective& f, std::vector<double> start, const NelderMeadOptions& options);

}  // namespace elmlab
