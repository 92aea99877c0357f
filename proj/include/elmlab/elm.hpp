#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "elmlab/entropy.hpp"
#include "elmlab/level2_distribution.hpp"
#include "elmlab/level2_losses.hpp"
#include "elmlab/rng.hpp"

namespace elmlab {

struct OptimizerConfig {
  std::size_t starts = 16;
  std::size_t max_iterations = 2000;  // per start
  double tolerance = 1e-9;            // on the objective
  double alpha_max = kAlphaMax;       // total-concentration cap of each component
  std::size_t components = 2;

  /// Throws std::invalid_argument on out-of-range settings.
  void validate() const;

  friend bool operator==(const OptimizerConfig&, const OptimizerConfig&) = default;
};

/// Empirical loss minimiser over M-component Dirichlet mixtures.
struct ElmFit {
  Level2Distribution q;
  /// empirical_l2_risk(config, q, labels).
  double objective = 0.0;
  /// Uncertainty reported for the fit: 0 when is_dirac, else raw_quantized_entropy_bits.
  double quantized_entropy_bits = 0.0;
  /// Quantized entropy of q itself, before the Dirac reading.
  double raw_quantized_entropy_bits = 0.0;
  SimplexPoint predicted_mean;
  bool is_dirac = false;
  std::size_t starts_agreeing = 0;
  std::size_t iterations_used = 0;
  /// Unconstrained coordinates of q (component logits, then weight logits).
  std::vector<double> parameters;
};

class FitError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Mixture encoded by unconstrained coordinates:
/// alpha_{m,k} = (alpha_max / K) * sigmoid(u_{m,k}); weights = softmax(0, v_2, ..., v_M).
/// The per-class cap alpha_max / K keeps every component's total within alpha_max.
class MixtureParametrization {
public:
  MixtureParametrization(std::size_t classes, std::size_t components, double alpha_max);

  std::size_t dimension() const { return components_ * classes_ + components_ - 1; }
  std::size_t classes() const { return classes_; }
  std::size_t components() const { return components_; }

  Level2Distribution decode(std::span<const double> x) const;

  /// Inverse of decode for alphas strictly below the per-class cap.
  std::vector<double> encode(const std::vector<std::vector<double>>& alphas, std::span<const double> weights) const;

  double class_cap() const { return alpha_max_ / static_cast<double>(classes_); }

private:
  std::size_t classes_;
  std::size_t components_;
  double alpha_max_;
};

/// True iff q is an explicit Dirac, its quantized entropy is below 0.05 bits,
/// or the spread of theta under its components with weight > 1e-3 is no larger
/// than that of a Dirichlet at a tenth of the cap:
/// max_k sd(theta_k) <= sqrt(0.25 / (0.1 alpha_max + 1)).
bool dirac_check(const Level2Distribution& q, const SimplexGrid& grid, double alpha_max = kAlphaMax);

/// Multi-start derivative-free fit. Deterministic given the inputs and rng state.
/// Throws FitError when no start converges.
ElmFit fit_elm(std::span<const Label> labels, std::size_t classes, const LossConfig& config,
               const OptimizerConfig& opt, SeededRng& rng);
ElmFit fit_elm_counts(std::span<const std::size_t> counts, const LossConfig& config, const OptimizerConfig& opt,
                      SeededRng& rng);
/// Same, with the quantization grid given explicitly (otherwise the default grid for K).
ElmFit fit_elm_counts(std::span<const std::size_t> counts, const LossConfig& config, const OptimizerConfig& opt,
                      SeededRng& rng, const SimplexGrid& grid);

}  // namespace elmlab
