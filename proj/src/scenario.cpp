#include "elmlab/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace elmlab {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

[[noreturn]] void fail(std::string_view origin, std::string_view field, std::string_view what)
{
  std::ostringstream msg;
  msg << origin << ": field '" << field << "': " << what;
  throw ScenarioError(msg.str());
}

const json& require(const json& j, std::string_view origin, const char* key)
{
  auto it = j.find(key);
  if (it == j.end()) fail(origin, key, "missing");
  return *it;
}

double as_real(const json& v, std::string_view origin, const std::string& field)
{
  if (!v.is_number()) fail(origin, field, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail(origin, field, "expected a finite number");
  return x;
}

std::uint64_t as_uint(const json& v, std::string_view origin, const std::string& field)
{
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(v.get<std::int64_t>());
  fail(origin, field, "expected a non-negative integer");
}

std::vector<double> real_list(const json& v, std::string_view origin, const std::string& field)
{
  if (!v.is_array()) fail(origin, field, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_real(v[i], origin, field + "[" + std::to_string(i) + "]"));
  return out;
}

ordered_json regularizer_to_json(const RegularizerKind& reg)
{
  switch (reg.type) {
    case RegularizerKind::Type::None: return "none";
    case RegularizerKind::Type::NegEntropyUniformPrior: return "neg_entropy";
    case RegularizerKind::Type::KLToDirichlet: {
      ordered_json j;
      j["kl_dirichlet"] = std::vector<double>(reg.prior->alpha().begin(), reg.prior->alpha().end());
      return j;
    }
  }
  return "none";
}

RegularizerKind regularizer_from_json(const json& v, std::string_view origin)
{
  if (v.is_string()) {
    const auto name = v.get<std::string>();
    if (name == "none") return RegularizerKind::none();
    if (name == "neg_entropy") return RegularizerKind::neg_entropy();
    fail(origin, "regularizer", "unknown regularizer '" + name + "' (none, neg_entropy or {\"kl_dirichlet\": [...]})");
  }
  if (v.is_object() && v.size() == 1 && v.contains("kl_dirichlet")) {
    try {
      return RegularizerKind::kl_to(DirichletParams(real_list(v["kl_dirichlet"], origin, "regularizer.kl_dirichlet")));
    } catch (const ScenarioError&) {
      throw;
    } catch (const std::invalid_argument& e) {
      fail(origin, "regularizer.kl_dirichlet", e.what());
    }
  }
  fail(origin, "regularizer", "expected \"none\", \"neg_entropy\" or {\"kl_dirichlet\": [...]}");
}

Level1LossKind level1_from_json(const json& v, std::string_view origin)
{
  if (!v.is_string()) fail(origin, "level1_loss", "expected a string");
  try {
    return level1_loss_from_string(v.get<std::string>());
  } catch (const std::invalid_argument& e) {
    fail(origin, "level1_loss", e.what());
  }
}

SimplexPoint simplex_from_json(const json& v, std::string_view origin, const char* field)
{
  try {
    return SimplexPoint(real_list(v, origin, field));
  } catch (const ScenarioError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    fail(origin, field, e.what());
  }
}

void reject_unknown_keys(const json& j, std::string_view origin, std::initializer_list<std::string_view> known)
{
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find(known.begin(), known.end(), it.key()) == known.end()) fail(origin, it.key(), "unknown key");
  }
}

json load(const std::string& path)
{
  std::ifstream in(path);
  if (!in) throw ScenarioError(path + ": cannot open file");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ScenarioError(path + ": " + e.what());
  }
}

void rethrow_as_scenario_error(std::string_view origin, const std::invalid_argument& e)
{
  if (dynamic_cast<const ScenarioError*>(&e) != nullptr) throw;
  throw ScenarioError(std::string(origin) + ": " + e.what());
}

}  // namespace

void Scenario::validate() const
{
  auto bad = [](std::string_view field, std::string_view what) { fail("scenario", field, what); };
  if (k < 2) bad("k", "need at least two classes");
  if (theta_star.size() != k) bad("theta_star", "length differs from k");
  if (n_values.empty()) bad("n_values", "empty");
  for (std::size_t i = 0; i < n_values.size(); ++i) {
    if (n_values[i] == 0) bad("n_values", "sample sizes must be positive");
    if (i > 0 && n_values[i] <= n_values[i - 1]) bad("n_values", "must be strictly ascending");
  }
  if (lambda_values.empty()) bad("lambda_values", "empty");
  for (double l : lambda_values) {
    if (!(l >= 0.0) || !std::isfinite(l)) bad("lambda_values", "lambdas must be finite and non-negative");
  }
  if (runs < 1) bad("runs", "must be at least 1");
  if (level1 == Level1LossKind::BinaryBrier && k != 2) bad("level1_loss", "brier_binary needs k = 2");
  if (regularizer.type == RegularizerKind::Type::KLToDirichlet &&
      (!regularizer.prior || regularizer.prior->size() != k)) {
    bad("regularizer", "kl_dirichlet prior length differs from k");
  }
  if (k > 3) bad("k", "quantized entropies are available for k in {2, 3} only");
  if (grid_m < 1) bad("grid_m", "must be positive");
  try {
    optimizer.validate();
  } catch (const std::invalid_argument& e) {
    bad("optimizer", e.what());
  }
}

void CurveScenario::validate() const
{
  auto bad = [](std::string_view field, std::string_view what) { fail("curve scenario", field, what); };
  if (shape.size() != theta_star.size()) bad("shape", "length differs from theta_star");
  for (double s : shape) {
    if (!(s > 0.0) || !std::isfinite(s)) bad("shape", "ratios must be positive");
  }
  if (lambda_values.empty()) bad("lambda_values", "empty");
  for (double l : lambda_values) {
    if (!(l >= 0.0) || !std::isfinite(l)) bad("lambda_values", "lambdas must be finite and non-negative");
  }
  if (!(c_min > 0.0) || !(c_max > c_min) || !std::isfinite(c_max)) bad("c_min", "need 0 < c_min < c_max");
  if (c_steps < 2) bad("c_steps", "need at least two grid points");
  if (level1 == Level1LossKind::BinaryBrier && theta_star.size() != 2) bad("level1_loss", "brier_binary needs k = 2");
  if (regularizer.type == RegularizerKind::Type::KLToDirichlet &&
      (!regularizer.prior || regularizer.prior->size() != theta_star.size())) {
    bad("regularizer", "kl_dirichlet prior length differs from k");
  }
}

std::vector<double> CurveScenario::c_grid() const
{
  std::vector<double> grid(c_steps);
  const double lo = std::log(c_min);
  const double hi = std::log(c_max);
  for (std::size_t i = 0; i < c_steps; ++i) {
    grid[i] = std::exp(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(c_steps - 1));
  }
  grid.front() = c_min;
  grid.back() = c_max;
  return grid;
}

ordered_json to_json(const Scenario& s)
{
  ordered_json j;
  j["id"] = s.id;
  j["k"] = s.k;
  j["theta_star"] = std::vector<double>(s.theta_star.probs().begin(), s.theta_star.probs().end());
  j["n_values"] = s.n_values;
  j["lambda_values"] = s.lambda_values;
  j["runs"] = s.runs;
  j["level1_loss"] = std::string(to_string(s.level1));
  j["regularizer"] = regularizer_to_json(s.regularizer);
  j["regularizer_scope"] = std::string(to_string(s.scope));
  j["grid_m"] = s.grid_m;
  j["seed"] = s.seed;
  j["optimizer"] = {{"starts", s.optimizer.starts},
                    {"max_iter", s.optimizer.max_iterations},
                    {"tol", s.optimizer.tolerance},
                    {"alpha_max", s.optimizer.alpha_max},
                    {"components", s.optimizer.components}};
  return j;
}

ordered_json to_json(const CurveScenario& s)
{
  ordered_json j;
  j["id"] = s.id;
  j["theta_star"] = std::vector<double>(s.theta_star.probs().begin(), s.theta_star.probs().end());
  j["lambda_values"] = s.lambda_values;
  j["c_min"] = s.c_min;
  j["c_max"] = s.c_max;
  j["c_steps"] = s.c_steps;
  j["shape"] = s.shape;
  j["level1_loss"] = std::string(to_string(s.level1));
  j["regularizer"] = regularizer_to_json(s.regularizer);
  return j;
}

Scenario scenario_from_json(const json& j, std::string_view origin)
{
  if (!j.is_object()) throw ScenarioError(std::string(origin) + ": expected a JSON object");
  reject_unknown_keys(j, origin,
                      {"id", "k", "theta_star", "n_values", "lambda_values", "runs", "level1_loss", "regularizer",
                       "regularizer_scope", "grid_m", "seed", "optimizer"});
  Scenario s;
  if (j.contains("id")) {
    if (!j["id"].is_string()) fail(origin, "id", "expected a string");
    s.id = j["id"].get<std::string>();
  }
  s.k = as_uint(require(j, origin, "k"), origin, "k");
  s.theta_star = simplex_from_json(require(j, origin, "theta_star"), origin, "theta_star");

  const json& ns = require(j, origin, "n_values");
  if (!ns.is_array()) fail(origin, "n_values", "expected an array of integers");
  for (std::size_t i = 0; i < ns.size(); ++i) s.n_values.push_back(as_uint(ns[i], origin, "n_values[" + std::to_string(i) + "]"));
  s.lambda_values = real_list(require(j, origin, "lambda_values"), origin, "lambda_values");
  s.runs = as_uint(require(j, origin, "runs"), origin, "runs");
  s.level1 = level1_from_json(require(j, origin, "level1_loss"), origin);
  s.regularizer = regularizer_from_json(require(j, origin, "regularizer"), origin);
  if (j.contains("regularizer_scope")) {
    const json& v = j["regularizer_scope"];
    if (!v.is_string()) fail(origin, "regularizer_scope", "expected a string");
    try {
      s.scope = regularizer_scope_from_string(v.get<std::string>());
    } catch (const std::invalid_argument& e) {
      fail(origin, "regularizer_scope", e.what());
    }
  }
  s.grid_m = as_uint(require(j, origin, "grid_m"), origin, "grid_m");
  s.seed = as_uint(require(j, origin, "seed"), origin, "seed");

  if (j.contains("optimizer")) {
    const json& o = j["optimizer"];
    if (!o.is_object()) fail(origin, "optimizer", "expected an object");
    reject_unknown_keys(o, std::string(origin) + ": optimizer", {"starts", "max_iter", "tol", "alpha_max", "components"});
    if (o.contains("starts")) s.optimizer.starts = as_uint(o["starts"], origin, "optimizer.starts");
    if (o.contains("max_iter")) s.optimizer.max_iterations = as_uint(o["max_iter"], origin, "optimizer.max_iter");
    if (o.contains("tol")) s.optimizer.tolerance = as_real(o["tol"], origin, "optimizer.tol");
    if (o.contains("alpha_max")) s.optimizer.alpha_max = as_real(o["alpha_max"], origin, "optimizer.alpha_max");
    if (o.contains("components")) s.optimizer.components = as_uint(o["components"], origin, "optimizer.components");
  }
  try {
    s.validate();
  } catch (const std::invalid_argument& e) {
    rethrow_as_scenario_error(origin, e);
  }
  return s;
}

CurveScenario curve_scenario_from_json(const json& j, std::string_view origin)
{
  if (!j.is_object()) throw ScenarioError(std::string(origin) + ": expected a JSON object");
  reject_unknown_keys(j, origin,
                      {"id", "theta_star", "lambda_values", "c_min", "c_max", "c_steps", "shape", "level1_loss",
                       "regularizer"});
  CurveScenario s;
  if (j.contains("id")) {
    if (!j["id"].is_string()) fail(origin, "id", "expected a string");
    s.id = j["id"].get<std::string>();
  }
  s.theta_star = simplex_from_json(require(j, origin, "theta_star"), origin, "theta_star");
  s.lambda_values = real_list(require(j, origin, "lambda_values"), origin, "lambda_values");
  s.c_min = as_real(require(j, origin, "c_min"), origin, "c_min");
  s.c_max = as_real(require(j, origin, "c_max"), origin, "c_max");
  s.c_steps = as_uint(require(j, origin, "c_steps"), origin, "c_steps");
  s.shape = real_list(require(j, origin, "shape"), origin, "shape");
  if (j.contains("level1_loss")) s.level1 = level1_from_json(j["level1_loss"], origin);
  if (j.contains("regularizer")) s.regularizer = regularizer_from_json(j["regularizer"], origin);
  try {
    s.validate();
  } catch (const std::invalid_argument& e) {
    rethrow_as_scenario_error(origin, e);
  }
  return s;
}

Scenario read_scenario(const std::string& path) { return scenario_from_json(load(path), path); }

CurveScenario read_curve_scenario(const std::string& path) { return curve_scenario_from_json(load(path), path); }

std::vector<std::string> builtin_table_names()
{
  return {"binary-05", "binary-005", "ternary-uniform", "ternary-imbalanced"};
}

std::vector<std::string> builtin_curve_names() { return {"figure1-left", "figure1-right"}; }

bool is_builtin_table(std::string_view name)
{
  const auto names = builtin_table_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

bool is_builtin_curve(std::string_view name)
{
  const auto names = builtin_curve_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

Scenario builtin_scenario(std::string_view name)
{
  Scenario s;
  s.id = std::string(name);
  s.n_values = {10, 100, 1000, 10000, 100000};
  s.runs = 10;
  s.regularizer = RegularizerKind::neg_entropy();
  s.scope = RegularizerScope::PerSample;
  s.seed = 7;
  if (name == "binary-05" || name == "binary-005") {
    s.k = 2;
    // theta_star[1] is P(Y = 1), the positive class.
    s.theta_star = name == "binary-05" ? SimplexPoint({0.5, 0.5}) : SimplexPoint({0.95, 0.05});
    s.lambda_values = {0.0, 1e-5, 0.1, 0.5, 1.0, 10.0};
    s.level1 = Level1LossKind::BinaryBrier;
    s.grid_m = 1000;
  } else if (name == "ternary-uniform" || name == "ternary-imbalanced") {
    s.k = 3;
    s.theta_star = name == "ternary-uniform" ? SimplexPoint({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0})
                                             : SimplexPoint({0.875, 0.0625, 0.0625});
    s.lambda_values = {0.0, 1e-5, 10.0};
    s.level1 = Level1LossKind::Brier;
    s.grid_m = 50;
  } else {
    throw std::invalid_argument("unknown builtin scenario '" + std::string(name) + "'");
  }
  return s;
}

CurveScenario builtin_curve(std::string_view name)
{
  CurveScenario s;
  s.id = std::string(name);
  s.lambda_values = {0.0, 0.25, 0.5, 0.75, 1.0};
  s.c_min = 0.01;
  s.c_max = 100.0;
  s.c_steps = 201;
  s.level1 = Level1LossKind::LogLoss;
  s.regularizer = RegularizerKind::neg_entropy();
  if (name == "figure1-left") {
    s.theta_star = SimplexPoint({0.5, 0.5});
    s.shape = {1.0, 1.0};
  } else if (name == "figure1-right") {
    s.theta_star = SimplexPoint({0.25, 0.75});
    s.shape = {1.0, 3.0};
  } else {
    throw std::invalid_argument("unknown builtin curve '" + std::string(name) + "'");
  }
  return s;
}

}  // namespace elmlab
