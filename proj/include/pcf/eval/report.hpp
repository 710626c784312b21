#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "pcf/eval/metrics.hpp"
#include "pcf/simulator.hpp"

namespace pcf::eval {

enum class ReportFormat { Table, Jsonl, PlotData };

ReportFormat parse_report_format(const std::string& name);

struct ItemOutcome {
  std::string item_id;
  bool correct = false;

  friend bool operator==(const ItemOutcome&, const ItemOutcome&) = default;
};

struct MethodResult {
  MetricsReport metrics;
  std::vector<ItemOutcome> items;  // sorted by id
};

/// Everything `score` produces and `report` consumes.
struct ReportBundle {
  std::optional<std::string> baseline;
  std::vector<MethodResult> methods;
};

nlohmann::json to_json(const MetricsReport& m);
MetricsReport metrics_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ReportBundle& bundle);
ReportBundle bundle_from_json(const nlohmann::json& j);

/// Builds a bundle from prediction records grouped by method.
ReportBundle build_bundle(const std::vector<PredictionRecord>& predictions,
                          const std::optional<std::string>& baseline);

/// Byte-deterministic rendering. Table: fixed-width text, accuracies as
/// percentages with 2 decimals and p-values to 4 significant figures.
/// Jsonl: one metrics object per method. PlotData: CSV of
/// (method, item_id, delta) against the baseline, delta in {-1, 0, 1}.
std::string render_report(const ReportBundle& bundle, ReportFormat format);

/// Writes render_report() to `path`; throws Error if it cannot.
void emit_report(const ReportBundle& bundle, ReportFormat format, const std::filesystem::path& path);

/// Simulation grid as a table or jsonl; plot-data is not supported.
std::string render_simulation(std::span<const sim::SimulationResult> results, ReportFormat format);

/// "%.4g"-style formatting used for p-values.
std::string format_p_value(double p);
/// Percentage with two decimals, rounded half away from zero.
std::string format_percent(double fraction);

}  // namespace pcf::eval
