#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "elmlab/dirichlet.hpp"
#include "elmlab/level2_distribution.hpp"
#include "elmlab/rng.hpp"
#include "elmlab/simplex.hpp"

namespace elmlab {

/// Lattice points of the K-simplex with spacing 1/m, in lexicographic order
/// of their integer coordinates. K in {2, 3}.
class SimplexGrid {
public:
  std::size_t classes() const { return classes_; }
  std::size_t resolution() const { return resolution_; }
  std::size_t size() const { return points_.size(); }
  const std::vector<SimplexPoint>& points() const { return points_; }
  const SimplexPoint& operator[](std::size_t i) const { return points_[i]; }

  /// Quadrature weight of each point w.r.t. Lebesgue measure on the first
  /// K-1 coordinates (trapezoid for K = 2, piecewise-linear on the lattice
  /// triangulation for K = 3). Weights sum to 1/(K-1)!.
  const std::vector<double>& quadrature_weights() const { return weights_; }

  /// Index of the lattice point nearest to theta (largest-remainder rounding).
  std::size_t nearest_index(const SimplexPoint& theta) const;

  friend SimplexGrid build_simplex_grid(std::size_t k, std::size_t m);

private:
  std::size_t classes_ = 0;
  std::size_t resolution_ = 0;
  std::vector<SimplexPoint> points_;
  std::vector<double> weights_;
};

/// Number of lattice points C(m + K - 1, K - 1).
std::size_t simplex_grid_size(std::size_t k, std::size_t m);

/// Throws std::invalid_argument unless K in {2, 3} and m >= 1.
SimplexGrid build_simplex_grid(std::size_t k, std::size_t m);

/// Grid used for quantized entropies: m = 1000 for K = 2, m = 50 for K = 3.
std::size_t default_grid_resolution(std::size_t k);

/// Differential entropy of Dir(alpha) in nats:
/// log B(alpha) + (alpha_0 - K) psi(alpha_0) - sum_j (alpha_j - 1) psi(alpha_j).
double dirichlet_differential_entropy(const DirichletParams& params);

/// Differential entropy (nats) of a Dirichlet or Dirichlet mixture.
/// Mixtures are decomposed into closed-form component entropies, the weight
/// entropy, and an overlap correction integrated by quadrature adapted to each
/// component (K <= 3) or Monte Carlo (K > 3). Throws std::domain_error for Dirac.
double differential_entropy(const Level2Distribution& q);

/// Same quantity by quadrature of -p log p on a simplex grid. Only accurate
/// when the density is smooth at the grid spacing.
double differential_entropy_on_grid(const Level2Distribution& q, const SimplexGrid& grid);

struct MonteCarloEstimate {
  double estimate = 0.0;
  double standard_error = 0.0;
};

/// -E[log q(theta)] estimated from n draws of q.
MonteCarloEstimate differential_entropy_mc(const Level2Distribution& q, std::size_t n, SeededRng& rng);

/// Shannon entropy in bits of q quantized on the grid. Each mixture component's
/// density is evaluated at every lattice point (boundary points a quarter bin
/// inside), normalised over the grid, then weighted.
/// A Dirac puts all mass on its nearest lattice point.
double quantized_entropy(const Level2Distribution& q, const SimplexGrid& grid);

/// Probability vector of q quantized on the grid (same construction).
std::vector<double> quantized_masses(const Level2Distribution& q, const SimplexGrid& grid);

/// Shannon entropy in bits of a probability vector.
double shannon_entropy_bits(std::span<const double> probs);

}  // namespace elmlab
