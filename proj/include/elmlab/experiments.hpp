#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "elmlab/elm.hpp"
#include "elmlab/scenario.hpp"

namespace elmlab {

/// One ELM fit inside a table cell.
struct RunRecord {
  std::size_t run = 0;
  std::uint64_t data_stream = 0;
  std::uint64_t fit_stream = 0;
  std::vector<std::size_t> counts;
  /// Empirical frequency of the reported class (index 1 for K = 2, else 0).
  double label_freq = 0.0;
  /// ELM predicted mean of the reported class.
  double theta_hat = 0.0;
  double entropy_bits = 0.0;
  double raw_entropy_bits = 0.0;
  bool is_dirac = false;
  double objective = 0.0;
  std::size_t starts_agreeing = 0;
  std::size_t iterations = 0;
  /// Total variation between the quantized ELM and the bin of theta*.
  double tv_to_target = 0.0;
  /// Unconstrained optimizer coordinates and the decoded mixture.
  std::vector<double> parameters;
  std::vector<double> weights;
  std::vector<std::vector<double>> alphas;
};

struct TableCell {
  double lambda = 0.0;
  std::size_t n = 0;
  std::vector<RunRecord> runs;
  double entropy_mean = 0.0;
  double entropy_std = 0.0;
  double theta_hat_mean = 0.0;
  double theta_hat_std = 0.0;
  double label_freq_mean = 0.0;
  double label_freq_std = 0.0;
};

struct TableResult {
  Scenario scenario;
  /// Lambda-major, N-minor, in scenario order.
  std::vector<TableCell> cells;

  /// Throws std::out_of_range if the cell is not part of the grid.
  const TableCell& cell(double lambda, std::size_t n) const;
};

struct RunOptions {
  /// Worker threads; 0 means std::thread::hardware_concurrency().
  std::size_t jobs = 0;
  /// Called once per finished cell, from whichever worker finished it.
  std::function<void(const TableCell&)> on_cell;
};

/// Coordinate of the simplex reported as theta-hat: 1 (positive class) for
/// K = 2, otherwise 0.
std::size_t reported_class(std::size_t k);

/// Mean and sample standard deviation (n - 1 denominator; 0 for one value).
std::pair<double, double> mean_and_std(const std::vector<double>& values);

/// Stream ids: labels depend on (N, run) only, so every lambda sees the same
/// data; the optimizer stream also depends on lambda.
std::uint64_t data_stream_id(std::size_t n, std::size_t run);
std::uint64_t fit_stream_id(double lambda, std::size_t n, std::size_t run);

/// Label counts of N i.i.d. draws from theta_star.
std::vector<std::size_t> draw_counts(const SimplexPoint& theta_star, std::size_t n, SeededRng& rng);

/// Fits every (lambda, N, run). Fit failures are rethrown as FitError naming
/// the cell.
TableResult run_table(const Scenario& scenario, const RunOptions& options = {});

struct CurveResult {
  CurveScenario scenario;
  std::vector<double> c_grid;
  /// values[l][i]: expected level-2 loss at lambda_values[l], c_grid[i].
  std::vector<std::vector<double>> values;
  std::vector<double> argmin_c;
  /// False when the minimum sits on either end of the c grid.
  std::vector<bool> argmin_interior;
};

CurveResult run_curve(const CurveScenario& scenario);

struct LambdaAudit {
  double lambda = 0.0;
  std::vector<std::size_t> n_values;
  /// Across-run mean and std of the quantized entropy, per N.
  std::vector<double> entropy_mean;
  std::vector<double> entropy_std;
  /// Mean total-variation distance between quantized ELM and the bin of theta*.
  std::vector<double> tv_to_target;
  /// Mean |theta_hat - theta*| on the reported class.
  std::vector<double> theta_error;

  /// A1: no increase beyond 2 pooled std between consecutive N.
  bool a1_non_increasing = false;
  /// A1: some later N has mean entropy below an earlier one by more than the band.
  bool a1_strict_decrease = false;
  /// All means coincide (e.g. every fit is a Dirac).
  bool a1_degenerate_constant = false;
  bool a1_pass = false;

  /// Share of runs at the largest N judged Dirac.
  double terminal_dirac_fraction = 0.0;
  /// theta error at the largest N no larger than at the smallest.
  bool a2_mean_converging = false;
  bool a2_pass = false;
};

struct AuditReport {
  std::string scenario_id;
  std::vector<LambdaAudit> lambdas;
};

/// Definition-style audit of every lambda row. Reuses run_table.
AuditReport run_appropriateness_audit(const Scenario& scenario, const RunOptions& options = {});
/// Same, from an already computed table.
AuditReport audit_table(const TableResult& table);

struct ProbeTrial {
  std::size_t n = 0;
  double label_freq = 0.0;
  double theta_hat = 0.0;
  double entropy_bits = 0.0;
  double raw_entropy_bits = 0.0;
  bool is_dirac = false;
  bool passed = false;
};

struct ProbeResult {
  std::string name;
  std::string scenario_id;
  std::string claim;
  std::vector<ProbeTrial> trials;
  std::size_t passes = 0;
  bool passed = false;
};

struct TheoremReport {
  std::vector<ProbeResult> probes;
  bool all_passed = false;
};

/// Numeric probes of the three non-appropriateness results on each scenario:
///   theorem1: no regularizer, 20 samples with N cycling over {10, 100, 1000};
///             the ELM must be a Dirac whose mean is within 0.02 of the label frequency.
///   theorem3: lambda = 1e-5, 20 samples as above; the ELM must be a Dirac.
///   theorem2: lambda = 10, N = 1e5, 5 samples; non-Dirac with entropy above 1 bit.
TheoremReport run_theorem_report(const std::vector<Scenario>& scenarios, const RunOptions& options = {});

}  // namespace elmlab
