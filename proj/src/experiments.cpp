#include "elmlab/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "elmlab/entropy.hpp"

namespace elmlab {

namespace {

constexpr std::uint64_t kDataTag = 0x6461746100000000ULL;
constexpr std::uint64_t kFitTag = 0x6669740000000000ULL;
constexpr std::uint64_t kProbeTag = 0x70726f6265000000ULL;

// Runs task(i) for i in [0, count) on up to `jobs` threads. The first
// exception (lowest index) is rethrown after all workers stop.
void parallel_for(std::size_t count, std::size_t jobs, const std::function<void(std::size_t)>& task)
{
  if (jobs == 0) jobs = std::max<std::size_t>(1, std::thread::hardware_concurrency());
  jobs = std::min(jobs, count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  auto worker = [&] {
    for (std::size_t i = next++; i < count && !stop; i = next++) {
      try {
        task(i);
      } catch (...) {
        errors[i] = std::current_exception();
        stop = true;
      }
    }
  };
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

double tv_to_bin(const Level2Distribution& q, const SimplexGrid& grid, const SimplexPoint& target)
{
  const std::vector<double> masses = quantized_masses(q, grid);
  return std::clamp(1.0 - masses[grid.nearest_index(target)], 0.0, 1.0);
}

double frequency(const std::vector<std::size_t>& counts, std::size_t cls)
{
  const double n = static_cast<double>(std::accumulate(counts.begin(), counts.end(), std::size_t{0}));
  return static_cast<double>(counts[cls]) / n;
}

RunRecord make_record(std::size_t run, const std::vector<std::size_t>& counts, const ElmFit& fit,
                      const SimplexGrid& grid, const SimplexPoint& theta_star)
{
  const std::size_t cls = reported_class(counts.size());
  RunRecord r;
  r.run = run;
  r.counts = counts;
  r.label_freq = frequency(counts, cls);
  r.theta_hat = fit.predicted_mean[cls];
  r.entropy_bits = fit.quantized_entropy_bits;
  r.raw_entropy_bits = fit.raw_quantized_entropy_bits;
  r.is_dirac = fit.is_dirac;
  r.objective = fit.objective;
  r.starts_agreeing = fit.starts_agreeing;
  r.iterations = fit.iterations_used;
  r.tv_to_target = tv_to_bin(fit.q, grid, theta_star);
  r.parameters = fit.parameters;
  const DirichletMixture mix = fit.q.as_mixture();
  r.weights = mix.weights();
  for (const auto& c : mix.components()) r.alphas.emplace_back(c.alpha().begin(), c.alpha().end());
  return r;
}

void aggregate(TableCell& cell)
{
  std::vector<double> h, t, f;
  for (const auto& r : cell.runs) {
    h.push_back(r.entropy_bits);
    t.push_back(r.theta_hat);
    f.push_back(r.label_freq);
  }
  std::tie(cell.entropy_mean, cell.entropy_std) = mean_and_std(h);
  std::tie(cell.theta_hat_mean, cell.theta_hat_std) = mean_and_std(t);
  std::tie(cell.label_freq_mean, cell.label_freq_std) = mean_and_std(f);
}

}  // namespace

std::size_t reported_class(std::size_t k) { return k == 2 ? 1 : 0; }

std::pair<double, double> mean_and_std(const std::vector<double>& values)
{
  if (values.empty()) return {0.0, 0.0};
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  if (values.size() == 1) return {mean, 0.0};
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / (n - 1.0))};
}

std::uint64_t data_stream_id(std::size_t n, std::size_t run) { return derive_stream({kDataTag, n, run}); }

std::uint64_t fit_stream_id(double lambda, std::size_t n, std::size_t run)
{
  return derive_stream({kFitTag, tag_of(lambda), n, run});
}

std::vector<std::size_t> draw_counts(const SimplexPoint& theta_star, std::size_t n, SeededRng& rng)
{
  std::vector<std::size_t> counts(theta_star.size(), 0);
  for (std::size_t i = 0; i < n; ++i) ++counts[categorical_sample(theta_star, rng).index];
  return counts;
}

const TableCell& TableResult::cell(double lambda, std::size_t n) const
{
  for (const auto& c : cells) {
    if (c.lambda == lambda && c.n == n) return c;
  }
  std::ostringstream msg;
  msg << "no table cell for lambda=" << lambda << ", N=" << n;
  throw std::out_of_range(msg.str());
}

TableResult run_table(const Scenario& scenario, const RunOptions& options)
{
  scenario.validate();
  const SimplexGrid grid = build_simplex_grid(scenario.k, scenario.grid_m);
  const std::size_t n_count = scenario.n_values.size();
  const std::size_t runs = scenario.runs;

  // Samples shared by every lambda.
  std::vector<std::vector<std::size_t>> counts(n_count * runs);
  for (std::size_t ni = 0; ni < n_count; ++ni) {
    for (std::size_t r = 0; r < runs; ++r) {
      SeededRng rng(scenario.seed, data_stream_id(scenario.n_values[ni], r));
      counts[ni * runs + r] = draw_counts(scenario.theta_star, scenario.n_values[ni], rng);
    }
  }

  TableResult result;
  result.scenario = scenario;
  for (double lambda : scenario.lambda_values) {
    for (std::size_t n : scenario.n_values) {
      TableCell cell;
      cell.lambda = lambda;
      cell.n = n;
      cell.runs.resize(runs);
      result.cells.push_back(std::move(cell));
    }
  }
  std::vector<std::atomic<std::size_t>> remaining(result.cells.size());
  for (auto& r : remaining) r = runs;
  std::mutex report_mutex;

  parallel_for(result.cells.size() * runs, options.jobs, [&](std::size_t task) {
    const std::size_t ci = task / runs;
    const std::size_t r = task % runs;
    const std::size_t ni = ci % n_count;
    TableCell& cell = result.cells[ci];
    const auto& c = counts[ni * runs + r];
    const std::uint64_t stream = fit_stream_id(cell.lambda, cell.n, r);
    SeededRng rng(scenario.seed, stream);
    try {
      const ElmFit fit = fit_elm_counts(c, scenario.loss_config(cell.lambda), scenario.optimizer, rng, grid);
      RunRecord rec = make_record(r, c, fit, grid, scenario.theta_star);
      rec.data_stream = data_stream_id(cell.n, r);
      rec.fit_stream = stream;
      cell.runs[r] = std::move(rec);
    } catch (const std::exception& e) {
      std::ostringstream msg;
      msg << scenario.id << " cell lambda=" << cell.lambda << " N=" << cell.n << " run=" << r << ": " << e.what();
      throw FitError(msg.str());
    }
    if (--remaining[ci] == 0) {
      aggregate(cell);
      if (options.on_cell) {
        std::lock_guard lock(report_mutex);
        options.on_cell(cell);
      }
    }
  });
  return result;
}

CurveResult run_curve(const CurveScenario& scenario)
{
  scenario.validate();
  CurveResult result;
  result.scenario = scenario;
  result.c_grid = scenario.c_grid();
  for (double lambda : scenario.lambda_values) {
    const LossConfig config{scenario.level1, scenario.regularizer, lambda, RegularizerScope::PerLabel};
    std::vector<double> row;
    for (double c : result.c_grid) {
      std::vector<double> alpha(scenario.shape.size());
      for (std::size_t k = 0; k < alpha.size(); ++k) alpha[k] = c * scenario.shape[k];
      row.push_back(expected_l2_risk_under_truth(config, DirichletParams(std::move(alpha)), scenario.theta_star));
    }
    const auto best = static_cast<std::size_t>(std::min_element(row.begin(), row.end()) - row.begin());
    result.argmin_c.push_back(result.c_grid[best]);
    result.argmin_interior.push_back(best > 0 && best + 1 < row.size());
    result.values.push_back(std::move(row));
  }
  return result;
}

AuditReport audit_table(const TableResult& table)
{
  const Scenario& s = table.scenario;
  const std::size_t cls = reported_class(s.k);
  AuditReport report;
  report.scenario_id = s.id;
  for (double lambda : s.lambda_values) {
    LambdaAudit a;
    a.lambda = lambda;
    a.n_values = s.n_values;
    for (std::size_t n : s.n_values) {
      const TableCell& cell = table.cell(lambda, n);
      a.entropy_mean.push_back(cell.entropy_mean);
      a.entropy_std.push_back(cell.entropy_std);
      double tv = 0.0;
      double err = 0.0;
      for (const auto& r : cell.runs) {
        tv += r.tv_to_target;
        err += std::abs(r.theta_hat - s.theta_star[cls]);
      }
      a.tv_to_target.push_back(tv / static_cast<double>(cell.runs.size()));
      a.theta_error.push_back(err / static_cast<double>(cell.runs.size()));
    }

    const std::size_t m = a.n_values.size();
    auto band = [&](std::size_t i, std::size_t j) {
      return 2.0 * std::sqrt(0.5 * (a.entropy_std[i] * a.entropy_std[i] + a.entropy_std[j] * a.entropy_std[j]));
    };
    a.a1_non_increasing = true;
    for (std::size_t i = 0; i + 1 < m; ++i) {
      if (a.entropy_mean[i + 1] > a.entropy_mean[i] + band(i, i + 1) + 1e-12) a.a1_non_increasing = false;
    }
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = i + 1; j < m; ++j) {
        const double drop = a.entropy_mean[i] - a.entropy_mean[j];
        if (drop > band(i, j) && drop > 1e-9) a.a1_strict_decrease = true;
      }
    }
    const auto [lo, hi] = std::minmax_element(a.entropy_mean.begin(), a.entropy_mean.end());
    a.a1_degenerate_constant = *hi - *lo <= 1e-9;
    a.a1_pass = a.a1_non_increasing && a.a1_strict_decrease;

    const TableCell& last = table.cell(lambda, s.n_values.back());
    const auto dirac_runs =
        std::count_if(last.runs.begin(), last.runs.end(), [](const RunRecord& r) { return r.is_dirac; });
    a.terminal_dirac_fraction = static_cast<double>(dirac_runs) / static_cast<double>(last.runs.size());
    a.a2_mean_converging = a.theta_error.back() <= a.theta_error.front();
    a.a2_pass = a.terminal_dirac_fraction == 1.0 && a.a2_mean_converging;
    report.lambdas.push_back(std::move(a));
  }
  return report;
}

AuditReport run_appropriateness_audit(const Scenario& scenario, const RunOptions& options)
{
  return audit_table(run_table(scenario, options));
}

namespace {

struct ProbeSpec {
  std::string name;
  std::string claim;
  RegularizerKind regularizer;
  double lambda;
  std::vector<std::size_t> n_cycle;
  std::size_t samples;
  std::function<bool(const ProbeTrial&)> verdict;
};

}  // namespace

TheoremReport run_theorem_report(const std::vector<Scenario>& scenarios, const RunOptions& options)
{
  const std::vector<ProbeSpec> specs = {
      {"theorem1", "no regularizer: ELM is a Dirac at the label frequency", RegularizerKind::none(), 0.0,
       {10, 100, 1000}, 20,
       [](const ProbeTrial& t) { return t.is_dirac && std::abs(t.theta_hat - t.label_freq) <= 0.02; }},
      {"theorem3", "lambda = 1e-5: ELM is a Dirac", RegularizerKind::neg_entropy(), 1e-5, {10, 100, 1000}, 20,
       [](const ProbeTrial& t) { return t.is_dirac; }},
      {"theorem2", "lambda = 10, N = 1e5: ELM keeps more than 1 bit of entropy", RegularizerKind::neg_entropy(), 10.0,
       {100000}, 5, [](const ProbeTrial& t) { return !t.is_dirac && t.entropy_bits > 1.0; }},
  };

  struct Job {
    std::size_t probe;
    std::size_t trial;
  };
  TheoremReport report;
  std::vector<Job> jobs;
  for (const auto& s : scenarios) {
    s.validate();
    for (std::size_t p = 0; p < specs.size(); ++p) {
      ProbeResult pr;
      pr.name = specs[p].name;
      pr.scenario_id = s.id;
      pr.claim = specs[p].claim;
      pr.trials.resize(specs[p].samples);
      for (std::size_t t = 0; t < specs[p].samples; ++t) jobs.push_back({report.probes.size(), t});
      report.probes.push_back(std::move(pr));
    }
  }

  parallel_for(jobs.size(), options.jobs, [&](std::size_t j) {
    const Job job = jobs[j];
    const std::size_t si = job.probe / specs.size();
    const Scenario& s = scenarios[si];
    const ProbeSpec& spec = specs[job.probe % specs.size()];
    const std::size_t n = spec.n_cycle[job.trial % spec.n_cycle.size()];
    const std::uint64_t probe_id = job.probe % specs.size();

    SeededRng data_rng(s.seed, derive_stream({kProbeTag, probe_id, job.trial, 0}));
    const auto counts = draw_counts(s.theta_star, n, data_rng);
    SeededRng fit_rng(s.seed, derive_stream({kProbeTag, probe_id, job.trial, 1}));
    LossConfig config = s.loss_config(spec.lambda);
    config.regularizer = spec.regularizer;
    const SimplexGrid grid = build_simplex_grid(s.k, s.grid_m);
    const ElmFit fit = fit_elm_counts(counts, config, s.optimizer, fit_rng, grid);

    const std::size_t cls = reported_class(s.k);
    ProbeTrial& t = report.probes[job.probe].trials[job.trial];
    t.n = n;
    t.label_freq = frequency(counts, cls);
    t.theta_hat = fit.predicted_mean[cls];
    t.entropy_bits = fit.quantized_entropy_bits;
    t.raw_entropy_bits = fit.raw_quantized_entropy_bits;
    t.is_dirac = fit.is_dirac;
    t.passed = spec.verdict(t);
  });

  report.all_passed = true;
  for (auto& p : report.probes) {
    p.passes = static_cast<std::size_t>(
        std::count_if(p.trials.begin(), p.trials.end(), [](const ProbeTrial& t) { return t.passed; }));
    p.passed = p.passes == p.trials.size();
    report.all_passed = report.all_passed && p.passed;
  }
  return report;
}

}  // namespace elmlab
