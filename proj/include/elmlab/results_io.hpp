#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "elmlab/experiments.hpp"

namespace elmlab {

enum class OutputFormat { Csv, Json };

/// "csv" or "json"; throws std::invalid_argument otherwise.
OutputFormat output_format_from_string(std::string_view name);

/// Shortest decimal text that reads back to the same double ('.' separator,
/// independent of the locale).
std::string format_real(double value);

/// One row per cell: scenario_id, lambda, N, run_count, entropy_mean,
/// entropy_std, theta_hat_mean, theta_hat_std, label_freq_mean, label_freq_std.
void write_table_csv(const TableResult& table, std::ostream& out);
nlohmann::ordered_json to_json(const TableResult& table);

/// Columns: scenario_id, lambda, c, expected_loss.
void write_curve_csv(const CurveResult& curve, std::ostream& out);
nlohmann::ordered_json to_json(const CurveResult& curve);

nlohmann::ordered_json to_json(const AuditReport& report);
nlohmann::ordered_json to_json(const TheoremReport& report);

/// Writes text to a file with LF line endings. Throws std::runtime_error on I/O failure.
void write_text_file(const std::string& path, const std::string& text);

void write_results(const TableResult& table, const std::string& path, OutputFormat format);
void write_results(const CurveResult& curve, const std::string& path, OutputFormat format);

}  // namespace elmlab
