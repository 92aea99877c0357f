#include "elmlab/results_io.hpp"

#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace elmlab {

using nlohmann::ordered_json;

OutputFormat output_format_from_string(std::string_view name)
{
  if (name == "csv") return OutputFormat::Csv;
  if (name == "json") return OutputFormat::Json;
  throw std::invalid_argument("unknown output format '" + std::string(name) + "' (csv or json)");
}

std::string format_real(double value)
{
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

void write_table_csv(const TableResult& table, std::ostream& out)
{
  out << "scenario_id,lambda,N,run_count,entropy_mean,entropy_std,theta_hat_mean,theta_hat_std,label_freq_mean,"
         "label_freq_std\n";
  for (const auto& c : table.cells) {
    out << table.scenario.id << ',' << format_real(c.lambda) << ',' << c.n << ',' << c.runs.size() << ','
        << format_real(c.entropy_mean) << ',' << format_real(c.entropy_std) << ',' << format_real(c.theta_hat_mean)
        << ',' << format_real(c.theta_hat_std) << ',' << format_real(c.label_freq_mean) << ','
        << format_real(c.label_freq_std) << '\n';
  }
}

ordered_json to_json(const TableResult& table)
{
  ordered_json j;
  j["scenario"] = to_json(table.scenario);
  ordered_json cells = ordered_json::array();
  for (const auto& c : table.cells) {
    ordered_json cj;
    cj["lambda"] = c.lambda;
    cj["N"] = c.n;
    cj["entropy_mean"] = c.entropy_mean;
    cj["entropy_std"] = c.entropy_std;
    cj["theta_hat_mean"] = c.theta_hat_mean;
    cj["theta_hat_std"] = c.theta_hat_std;
    cj["label_freq_mean"] = c.label_freq_mean;
    cj["label_freq_std"] = c.label_freq_std;
    ordered_json runs = ordered_json::array();
    for (const auto& r : c.runs) {
      runs.push_back({{"run", r.run},
                      {"seed", table.scenario.seed},
                      {"data_stream", r.data_stream},
                      {"fit_stream", r.fit_stream},
                      {"counts", r.counts},
                      {"label_freq", r.label_freq},
                      {"theta_hat", r.theta_hat},
                      {"entropy_bits", r.entropy_bits},
                      {"raw_entropy_bits", r.raw_entropy_bits},
                      {"is_dirac", r.is_dirac},
                      {"objective", r.objective},
                      {"tv_to_target", r.tv_to_target},
                      {"starts_agreeing", r.starts_agreeing},
                      {"iterations", r.iterations},
                      {"parameters", r.parameters},
                      {"weights", r.weights},
                      {"alphas", r.alphas}});
    }
    cj["runs"] = std::move(runs);
    cells.push_back(std::move(cj));
  }
  j["cells"] = std::move(cells);
  return j;
}

void write_curve_csv(const CurveResult& curve, std::ostream& out)
{
  out << "scenario_id,lambda,c,expected_loss\n";
  for (std::size_t l = 0; l < curve.values.size(); ++l) {
    for (std::size_t i = 0; i < curve.c_grid.size(); ++i) {
      out << curve.scenario.id << ',' << format_real(curve.scenario.lambda_values[l]) << ','
          << format_real(curve.c_grid[i]) << ',' << format_real(curve.values[l][i]) << '\n';
    }
  }
}

ordered_json to_json(const CurveResult& curve)
{
  ordered_json j;
  j["scenario"] = to_json(curve.scenario);
  j["c_grid"] = curve.c_grid;
  ordered_json series = ordered_json::array();
  for (std::size_t l = 0; l < curve.values.size(); ++l) {
    series.push_back({{"lambda", curve.scenario.lambda_values[l]},
                      {"argmin_c", curve.argmin_c[l]},
                      {"argmin_interior", static_cast<bool>(curve.argmin_interior[l])},
                      {"values", curve.values[l]}});
  }
  j["series"] = std::move(series);
  return j;
}

ordered_json to_json(const AuditReport& report)
{
  ordered_json j;
  j["scenario_id"] = report.scenario_id;
  ordered_json rows = ordered_json::array();
  for (const auto& a : report.lambdas) {
    rows.push_back({{"lambda", a.lambda},
                    {"n_values", a.n_values},
                    {"entropy_mean", a.entropy_mean},
                    {"entropy_std", a.entropy_std},
                    {"tv_to_target", a.tv_to_target},
                    {"theta_error", a.theta_error},
                    {"a1_non_increasing", a.a1_non_increasing},
                    {"a1_strict_decrease", a.a1_strict_decrease},
                    {"a1_degenerate_constant", a.a1_degenerate_constant},
                    {"a1_pass", a.a1_pass},
                    {"terminal_dirac_fraction", a.terminal_dirac_fraction},
                    {"a2_mean_converging", a.a2_mean_converging},
                    {"a2_pass", a.a2_pass},
                    {"appropriate", a.a1_pass && a.a2_pass}});
  }
  j["lambdas"] = std::move(rows);
  return j;
}

ordered_json to_json(const TheoremReport& report)
{
  ordered_json j;
  j["all_passed"] = report.all_passed;
  ordered_json probes = ordered_json::array();
  for (const auto& p : report.probes) {
    ordered_json trials = ordered_json::array();
    for (const auto& t : p.trials) {
      trials.push_back({{"N", t.n},
                        {"label_freq", t.label_freq},
                        {"theta_hat", t.theta_hat},
                        {"entropy_bits", t.entropy_bits},
                        {"raw_entropy_bits", t.raw_entropy_bits},
                        {"is_dirac", t.is_dirac},
                        {"passed", t.passed}});
    }
    probes.push_back({{"name", p.name},
                      {"scenario_id", p.scenario_id},
                      {"claim", p.claim},
                      {"passes", p.passes},
                      {"trials_total", p.trials.size()},
                      {"passed", p.passed},
                      {"trials", std::move(trials)}});
  }
  j["probes"] = std::move(probes);
  return j;
}

void write_text_file(const std::string& path, const std::string& text)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << text;
  out.flush();
  if (!out) throw std::runtime_error(path + ": write failed");
}

void write_results(const TableResult& table, const std::string& path, OutputFormat format)
{
  std::ostringstream text;
  if (format == OutputFormat::Csv) {
    write_table_csv(table, text);
  } else {
    text << to_json(table).dump(2) << '\n';
  }
  write_text_file(path, text.str());
}

void write_results(const CurveResult& curve, const std::string& path, OutputFormat format)
{
  std::ostringstream text;
  if (format == OutputFormat::Csv) {
    write_curve_csv(curve, text);
  } else {
    text << to_json(curve).dump(2) << '\n';
  }
  write_text_file(path, text.str());
}

}  // namespace elmlab
