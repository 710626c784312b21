#include "pcf/eval/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>

#include "pcf/errors.hpp"
#include "pcf/stats.hpp"

namespace pcf::eval {

using nlohmann::json;

namespace {

std::string printf_string(const char* fmt, auto... args) {
  const int size = std::snprintf(nullptr, 0, fmt, args...);
  std::string out(static_cast<std::size_t>(size) + 1, '\0');
  std::snprintf(out.data(), out.size(), fmt, args...);
  out.resize(static_cast<std::size_t>(size));
  return out;
}

const MethodResult* find_method(const ReportBundle& bundle, const std::string& name) {
  for (const auto& m : bundle.methods) {
    if (m.metrics.method == name) return &m;
  }
  return nullptr;
}

std::string render_table(const ReportBundle& bundle) {
  std::string out = printf_string("%-16s %6s %6s %8s %10s %8s %8s %11s %10s\n", "method", "n", "failed",
                                  "top-hit", "exact-top1", "macro", "tie-size", "imp/reg", "sign-p");
  for (const auto& method : bundle.methods) {
    const auto& m = method.metrics;
    const std::string macro = m.macro_by_source ? format_percent(*m.macro_by_source) : "-";
    const std::string paired =
        m.paired ? std::to_string(m.paired->improved) + "/" + std::to_string(m.paired->regressed) : "-";
    const std::string p = m.sign_test_p ? format_p_value(*m.sign_test_p) : "-";
    out += printf_string("%-16s %6zu %6zu %8s %10s %8s %8.2f %11s %10s\n", m.method.c_str(), m.n_items,
                         m.n_failed, format_percent(m.micro_accuracy).c_str(),
                         format_percent(m.exact_top1_accuracy).c_str(), macro.c_str(), m.mean_winner_set_size,
                         paired.c_str(), p.c_str());
  }

  bool any_sources = false;
  for (const auto& method : bundle.methods) any_sources = any_sources || !method.metrics.per_source.empty();
  if (any_sources) {
    out += printf_string("\n%-16s %-24s %6s %8s\n", "method", "source", "n", "top-hit");
    for (const auto& method : bundle.methods) {
      for (const auto& row : method.metrics.per_source) {
        out += printf_string("%-16s %-24s %6zu %8s\n", method.metrics.method.c_str(), row.source.c_str(), row.n,
                             format_percent(row.accuracy).c_str());
      }
    }
  }
  return out;
}

std::string render_plot_data(const ReportBundle& bundle) {
  std::string out = "method,item_id,delta\n";
  if (!bundle.baseline) throw Error("plot data needs a baseline method");
  const MethodResult* base = find_method(bundle, *bundle.baseline);
  if (base == nullptr) throw Error("baseline method " + *bundle.baseline + " not in report");
  std::map<std::string, bool> base_correct;
  for (const auto& item : base->items) base_correct[item.item_id] = item.correct;

  for (const auto& method : bundle.methods) {
    if (method.metrics.method == *bundle.baseline) continue;
    for (const auto& item : method.items) {
      const auto it = base_correct.find(item.item_id);
      if (it == base_correct.end()) throw Error("item " + item.item_id + " missing from baseline");
      const int delta = static_cast<int>(item.correct) - static_cast<int>(it->second);
      out += method.metrics.method + "," + item.item_id + "," + std::to_string(delta) + "\n";
    }
  }
  return out;
}

}  // namespace

ReportFormat parse_report_format(const std::string& name) {
  if (name == "table") return ReportFormat::Table;
  if (name == "jsonl") return ReportFormat::Jsonl;
  if (name == "plot-data") return ReportFormat::PlotData;
  throw ConfigError("unknown report format " + name + " (expected table, jsonl or plot-data)");
}

std::string format_p_value(double p) { return printf_string("%.4g", p); }

std::string format_percent(double fraction) {
  return printf_string("%.2f", stats::round_decimal(100.0 * fraction, 2));
}

json to_json(const MetricsReport& m) {
  json j = {{"method", m.method},
            {"n_items", m.n_items},
            {"n_failed", m.n_failed},
            {"micro_accuracy", m.micro_accuracy},
            {"exact_top1_accuracy", m.exact_top1_accuracy},
            {"mean_winner_set_size", m.mean_winner_set_size}};
  if (m.macro_by_source) j["macro_by_source"] = *m.macro_by_source;
  if (!m.per_source.empty()) {
    json rows = json::array();
    for (const auto& r : m.per_source) rows.push_back({{"source", r.source}, {"n", r.n}, {"accuracy", r.accuracy}});
    j["per_source"] = rows;
  }
  if (m.baseline) j["baseline"] = *m.baseline;
  if (m.paired) {
    j["improved"] = m.paired->improved;
    j["regressed"] = m.paired->regressed;
  }
  if (m.sign_test_p) j["sign_test_p"] = *m.sign_test_p;
  return j;
}

MetricsReport metrics_from_json(const json& j) {
  MetricsReport m;
  m.method = j.at("method").get<std::string>();
  m.n_items = j.at("n_items").get<std::size_t>();
  m.n_failed = j.value("n_failed", std::size_t{0});
  m.micro_accuracy = j.at("micro_accuracy").get<double>();
  m.exact_top1_accuracy = j.at("exact_top1_accuracy").get<double>();
  m.mean_winner_set_size = j.value("mean_winner_set_size", 0.0);
  if (j.contains("macro_by_source")) m.macro_by_source = j.at("macro_by_source").get<double>();
  if (j.contains("per_source")) {
    for (const json& r : j.at("per_source")) {
      m.per_source.push_back({r.at("source").get<std::string>(), r.at("n").get<std::size_t>(),
                              r.at("accuracy").get<double>()});
    }
  }
  if (j.contains("baseline")) m.baseline = j.at("baseline").get<std::string>();
  if (j.contains("improved")) {
    m.paired = PairedCounts{j.at("improved").get<std::size_t>(), j.at("regressed").get<std::size_t>()};
  }
  if (j.contains("sign_test_p")) m.sign_test_p = j.at("sign_test_p").get<double>();
  return m;
}

json to_json(const ReportBundle& bundle) {
  json methods = json::array();
  for (const auto& method : bundle.methods) {
    json items = json::array();
    for (const auto& item : method.items) items.push_back({{"id", item.item_id}, {"correct", item.correct}});
    methods.push_back({{"metrics", to_json(method.metrics)}, {"items", items}});
  }
  json j = {{"methods", methods}};
  if (bundle.baseline) j["baseline"] = *bundle.baseline;
  return j;
}

ReportBundle bundle_from_json(const json& j) {
  ReportBundle bundle;
  try {
    if (j.contains("baseline")) bundle.baseline = j.at("baseline").get<std::string>();
    for (const json& m : j.at("methods")) {
      MethodResult result;
      result.metrics = metrics_from_json(m.at("metrics"));
      for (const json& item : m.at("items")) {
        result.items.push_back({item.at("id").get<std::string>(), item.at("correct").get<bool>()});
      }
      bundle.methods.push_back(std::move(result));
    }
  } catch (const json::exception& e) {
    throw Error(std::string("malformed metrics file: ") + e.what());
  }
  return bundle;
}

ReportBundle build_bundle(const std::vector<PredictionRecord>& predictions,
                          const std::optional<std::string>& baseline) {
  std::map<std::string, std::vector<PredictionRecord>> by_method;
  for (const auto& p : predictions) by_method[p.method].push_back(p);
  for (auto& [name, records] : by_method) {
    std::stable_sort(records.begin(), records.end(),
                     [](const auto& a, const auto& b) { return a.item_id < b.item_id; });
  }
  if (baseline && !by_method.contains(*baseline)) throw Error("baseline method " + *baseline + " has no predictions");

  ReportBundle bundle;
  bundle.baseline = baseline;
  for (const auto& [name, records] : by_method) {
    MethodResult result;
    const std::span<const PredictionRecord> base =
        baseline ? std::span<const PredictionRecord>(by_method.at(*baseline)) : std::span<const PredictionRecord>{};
    result.metrics = compute_metrics(name, records, baseline, base);
    for (const auto& p : records) result.items.push_back({p.item_id, credit(p, Credit::TopHit) == 1.0});
    bundle.methods.push_back(std::move(result));
  }
  return bundle;
}

std::string render_report(const ReportBundle& bundle, ReportFormat format) {
  switch (format) {
    case ReportFormat::Table: return render_table(bundle);
    case ReportFormat::PlotData: return render_plot_data(bundle);
    case ReportFormat::Jsonl: {
      std::string out;
      for (const auto& method : bundle.methods) out += to_json(method.metrics).dump() + "\n";
      return out;
    }
  }
  throw Error("unknown report format");
}

std::string render_simulation(std::span<const sim::SimulationResult> results, ReportFormat format) {
  if (format == ReportFormat::PlotData) throw ConfigError("simulation output supports table or jsonl");
  std::string out;
  if (format == ReportFormat::Table) {
    out = printf_string("%4s %9s %14s %14s %14s %12s\n", "k", "trials", "majority-err", "exact-majority",
                        "consensus-err", "hoeffding");
  }
  for (const auto& r : results) {
    if (format == ReportFormat::Table) {
      const std::string exact = r.exact_majority_error ? printf_string("%.6f", *r.exact_majority_error) : "-";
      out += printf_string("%4zu %9zu %14.6f %14s %14.6f %12.6f\n", r.k, r.trials, r.empirical_majority_error,
                           exact.c_str(), r.empirical_consensus_error, r.hoeffding_bound);
    } else {
      json j = {{"k", r.k},
                {"trials", r.trials},
                {"majority_failures", r.majority_failures},
                {"consensus_failures", r.consensus_failures},
                {"empirical_majority_error", r.empirical_majority_error},
                {"empirical_consensus_error", r.empirical_consensus_error},
                {"hoeffding_bound", r.hoeffding_bound},
                {"score_model", "synthetic margin+noise (extension beyond the top-choice model)"}};
      if (r.exact_majority_error) j["exact_majority_error"] = *r.exact_majority_error;
      out += j.dump() + "\n";
    }
  }
  return out;
}

void emit_report(const ReportBundle& bundle, ReportFormat format, const std::filesystem::path& path) {
  const std::string text = render_report(bundle, format);
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write report to " + path.string());
  out << text;
  if (!out) throw Error("cannot write report to " + path.string());
}

}  // namespace pcf::eval
