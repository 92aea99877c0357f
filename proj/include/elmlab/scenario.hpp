#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "elmlab/elm.hpp"
#include "elmlab/level1_losses.hpp"
#include "elmlab/level2_losses.hpp"
#include "elmlab/simplex.hpp"

namespace elmlab {

/// A label-sampling experiment: for every (lambda, N, run) draw N labels from
/// theta_star and fit the ELM.
struct Scenario {
  std::string id = "custom";
  std::size_t k = 2;
  SimplexPoint theta_star = SimplexPoint::uniform(2);
  std::vector<std::size_t> n_values;
  std::vector<double> lambda_values;
  std::size_t runs = 10;
  Level1LossKind level1 = Level1LossKind::Brier;
  RegularizerKind regularizer = RegularizerKind::neg_entropy();
  RegularizerScope scope = RegularizerScope::PerSample;
  std::size_t grid_m = 0;
  std::uint64_t seed = 0;
  OptimizerConfig optimizer;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;

  LossConfig loss_config(double lambda) const { return {level1, regularizer, lambda, scope}; }

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Expected level-2 loss of Q = Dir(c * shape) as a function of c.
struct CurveScenario {
  std::string id = "custom";
  SimplexPoint theta_star = SimplexPoint::uniform(2);
  std::vector<double> lambda_values;
  double c_min = 0.01;
  double c_max = 100.0;
  std::size_t c_steps = 201;  // log-spaced, both ends included
  std::vector<double> shape;
  Level1LossKind level1 = Level1LossKind::LogLoss;
  RegularizerKind regularizer = RegularizerKind::neg_entropy();

  void validate() const;
  std::vector<double> c_grid() const;

  friend bool operator==(const CurveScenario&, const CurveScenario&) = default;
};

/// Raised for malformed scenario documents; the message names file and field.
class ScenarioError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

nlohmann::ordered_json to_json(const Scenario& s);
nlohmann::ordered_json to_json(const CurveScenario& s);
Scenario scenario_from_json(const nlohmann::json& j, std::string_view origin = "scenario");
CurveScenario curve_scenario_from_json(const nlohmann::json& j, std::string_view origin = "scenario");

Scenario read_scenario(const std::string& path);
CurveScenario read_curve_scenario(const std::string& path);

/// binary-05, binary-005, ternary-uniform, ternary-imbalanced.
std::vector<std::string> builtin_table_names();
/// figure1-left, figure1-right.
std::vector<std::string> builtin_curve_names();
bool is_builtin_table(std::string_view name);
bool is_builtin_curve(std::string_view name);
/// Throws std::invalid_argument for unknown names.
Scenario builtin_scenario(std::string_view name);
CurveScenario builtin_curve(std::string_view name);

}  // namespace elmlab
