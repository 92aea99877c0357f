#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "elmlab/experiments.hpp"
#include "elmlab/results_io.hpp"
#include "elmlab/scenario.hpp"

using namespace elmlab;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitRuntime = 2;

struct Globals {
  std::optional<std::uint64_t> seed;
  std::size_t jobs = 0;
};

std::uint64_t parse_seed(const std::string& text, const char* origin)
{
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    if (text.empty() || text[0] == '-') throw std::invalid_argument("negative");
    v = std::stoull(text, &used, 10);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) {
    throw std::invalid_argument(std::string(origin) + ": expected a non-negative integer seed, got '" + text + "'");
  }
  return v;
}

// --seed wins over ELM_LAB_SEED, which wins over the scenario file.
std::optional<std::uint64_t> seed_override(const Globals& g)
{
  if (g.seed) return g.seed;
  if (const char* env = std::getenv("ELM_LAB_SEED"); env != nullptr && *env != '\0') {
    return parse_seed(env, "ELM_LAB_SEED");
  }
  return std::nullopt;
}

Scenario load_table_scenario(const std::string& path, const std::string& builtin, std::optional<std::size_t> runs,
                             const Globals& g)
{
  if (path.empty() == builtin.empty()) throw std::invalid_argument("give exactly one of --scenario or --builtin");
  Scenario s = builtin.empty() ? read_scenario(path) : builtin_scenario(builtin);
  if (runs) s.runs = *runs;
  if (auto seed = seed_override(g)) s.seed = *seed;
  s.validate();
  return s;
}

RunOptions progress_options(const Globals& g)
{
  RunOptions opt;
  opt.jobs = g.jobs;
  opt.on_cell = [](const TableCell& c) {
    std::fprintf(stderr, "lambda=%s N=%zu runs=%zu entropy=%.3f (%.3f) theta_hat=%.3f label_freq=%.3f\n",
                 format_real(c.lambda).c_str(), c.n, c.runs.size(), c.entropy_mean, c.entropy_std, c.theta_hat_mean,
                 c.label_freq_mean);
  };
  return opt;
}

OutputFormat format_for(const std::string& format, const std::string& out)
{
  if (!format.empty()) return output_format_from_string(format);
  return out.size() >= 5 && out.substr(out.size() - 5) == ".json" ? OutputFormat::Json : OutputFormat::Csv;
}

}  // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Empirical loss minimisers for second-order (level-2) uncertainty losses"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  Globals g;
  std::uint64_t seed_flag = 0;
  auto* seed_opt = app.add_option("--seed", seed_flag, "Override the scenario seed (wins over ELM_LAB_SEED)");
  app.add_option("--jobs", g.jobs, "Parallel worker threads (0: all cores)");

  // table
  auto* table = app.add_subcommand("table", "Fit the ELM over a (lambda, N) grid");
  std::string t_scenario, t_builtin, t_out, t_format;
  std::optional<std::size_t> t_runs;
  table->add_option("--scenario", t_scenario, "Scenario JSON file")->check(CLI::ExistingFile);
  table->add_option("--builtin", t_builtin, "Builtin scenario name");
  table->add_option("--out", t_out, "Output file")->required();
  table->add_option("--format", t_format, "csv or json (default: from the file extension)");
  table->add_option("--runs", t_runs, "Override the number of runs per cell")->check(CLI::PositiveNumber);

  // curve
  auto* curve = app.add_subcommand("curve", "Expected level-2 loss of Dir(c * shape) against c");
  std::string c_scenario, c_builtin, c_out, c_format;
  std::vector<double> c_theta, c_lambdas, c_shape;
  std::optional<double> c_min, c_max;
  std::optional<std::size_t> c_steps;
  curve->add_option("--scenario", c_scenario, "Curve scenario JSON file")->check(CLI::ExistingFile);
  curve->add_option("--builtin", c_builtin, "figure1-left or figure1-right");
  curve->add_option("--theta-star", c_theta, "True level-1 distribution")->delimiter(',');
  curve->add_option("--lambdas", c_lambdas, "Regularization weights")->delimiter(',');
  curve->add_option("--c-min", c_min, "Smallest concentration");
  curve->add_option("--c-max", c_max, "Largest concentration");
  curve->add_option("--c-steps", c_steps, "Number of log-spaced concentrations");
  curve->add_option("--shape", c_shape, "Dirichlet shape ratios")->delimiter(',');
  curve->add_option("--out", c_out, "Output file")->required();
  curve->add_option("--format", c_format, "csv or json (default: from the file extension)");

  // audit
  auto* audit = app.add_subcommand("audit", "Appropriateness audit of every lambda row");
  std::string a_scenario, a_builtin, a_out;
  std::optional<std::size_t> a_runs;
  audit->add_option("--scenario", a_scenario, "Scenario JSON file")->check(CLI::ExistingFile);
  audit->add_option("--builtin", a_builtin, "Builtin scenario name");
  audit->add_option("--out", a_out, "Report JSON file")->required();
  audit->add_option("--runs", a_runs, "Override the number of runs per cell")->check(CLI::PositiveNumber);

  // verify
  auto* verify = app.add_subcommand("verify", "Theorem probes on the binary scenarios; exit 0 iff all pass");
  std::string v_out;
  verify->add_option("--out", v_out, "Report JSON file")->required();

  // builtin
  auto* builtin = app.add_subcommand("builtin", "Print a builtin scenario as JSON");
  std::string b_name, b_out;
  builtin->add_option("name", b_name, "Scenario name")->required();
  builtin->add_option("--out", b_out, "Write to this file instead of standard output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return kExitInvalid;
  }
  if (seed_opt->count() > 0) g.seed = seed_flag;

  try {
    if (*table) {
      const Scenario s = load_table_scenario(t_scenario, t_builtin, t_runs, g);
      const OutputFormat fmt = format_for(t_format, t_out);
      const TableResult result = run_table(s, progress_options(g));
      write_results(result, t_out, fmt);
    } else if (*curve) {
      CurveScenario s;
      if (!c_scenario.empty() && !c_builtin.empty()) throw std::invalid_argument("give at most one of --scenario or --builtin");
      if (!c_scenario.empty()) {
        s = read_curve_scenario(c_scenario);
      } else if (!c_builtin.empty()) {
        s = builtin_curve(c_builtin);
      } else {
        if (c_theta.empty() || c_lambdas.empty() || c_shape.empty()) {
          throw std::invalid_argument("curve needs --builtin, --scenario, or --theta-star, --lambdas and --shape");
        }
        s.id = "custom";
      }
      if (!c_theta.empty()) s.theta_star = SimplexPoint(c_theta);
      if (!c_lambdas.empty()) s.lambda_values = c_lambdas;
      if (!c_shape.empty()) s.shape = c_shape;
      if (c_min) s.c_min = *c_min;
      if (c_max) s.c_max = *c_max;
      if (c_steps) s.c_steps = *c_steps;
      s.validate();
      const OutputFormat fmt = format_for(c_format, c_out);
      write_results(run_curve(s), c_out, fmt);
    } else if (*audit) {
      const Scenario s = load_table_scenario(a_scenario, a_builtin, a_runs, g);
      const AuditReport report = run_appropriateness_audit(s, progress_options(g));
      write_text_file(a_out, to_json(report).dump(2) + "\n");
    } else if (*verify) {
      std::vector<Scenario> scenarios = {builtin_scenario("binary-05"), builtin_scenario("binary-005")};
      if (auto seed = seed_override(g)) {
        for (auto& s : scenarios) s.seed = *seed;
      }
      RunOptions opt;
      opt.jobs = g.jobs;
      const TheoremReport report = run_theorem_report(scenarios, opt);
      for (const auto& p : report.probes) {
        std::fprintf(stderr, "%s %s: %zu/%zu %s\n", p.scenario_id.c_str(), p.name.c_str(), p.passes, p.trials.size(),
                     p.passed ? "PASS" : "FAIL");
      }
      write_text_file(v_out, to_json(report).dump(2) + "\n");
      if (!report.all_passed) return kExitRuntime;
    } else if (*builtin) {
      std::string text;
      if (is_builtin_table(b_name)) {
        text = to_json(builtin_scenario(b_name)).dump(2) + "\n";
      } else if (is_builtin_curve(b_name)) {
        text = to_json(builtin_curve(b_name)).dump(2) + "\n";
      } else {
        throw std::invalid_argument("unknown builtin '" + b_name + "'");
      }
      if (b_out.empty()) {
        std::cout << text;
      } else {
        write_text_file(b_out, text);
      }
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}
