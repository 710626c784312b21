#include "pcf/eval/metrics.hpp"

#include <algorithm>
#include <map>

#include "pcf/errors.hpp"
#include "pcf/stats.hpp"

namespace pcf::eval {

double credit(const PredictionRecord& p, Credit rule) {
  if (!p.gold) throw Error("prediction " + p.item_id + " has no gold label");
  const CandidateId gold{*p.gold};
  if (rule == Credit::ExactTop1) return p.winners == CandidateSet{gold} ? 1.0 : 0.0;
  return std::find(p.winners.begin(), p.winners.end(), gold) != p.winners.end() ? 1.0 : 0.0;
}

double micro_accuracy(std::span<const PredictionRecord> predictions, Credit rule) {
  if (predictions.empty()) throw Error("no predictions");
  double total = 0.0;
  for (const auto& p : predictions) total += credit(p, rule);
  return total / static_cast<double>(predictions.size());
}

MacroAccuracy macro_by_source(std::span<const PredictionRecord> predictions, Credit rule) {
  if (predictions.empty()) throw Error("no predictions");
  std::map<std::string, std::pair<std::size_t, double>> buckets;
  for (const auto& p : predictions) {
    if (!p.source) throw Error("prediction " + p.item_id + " has no source bucket");
    auto& [n, correct] = buckets[*p.source];
    ++n;
    correct += credit(p, rule);
  }
  MacroAccuracy out;
  for (const auto& [source, tally] : buckets) {
    const double acc = tally.second / static_cast<double>(tally.first);
    out.per_source.push_back({source, tally.first, acc});
    out.macro += acc;
  }
  out.macro /= static_cast<double>(buckets.size());
  return out;
}

PairedCounts paired_comparison(std::span<const PredictionRecord> baseline,
                               std::span<const PredictionRecord> treatment, Credit rule) {
  std::map<std::string, double> base;
  for (const auto& p : baseline) {
    if (!base.emplace(p.item_id, credit(p, rule)).second) throw Error("duplicate baseline id " + p.item_id);
  }
  if (treatment.size() != base.size()) throw Error("baseline and treatment cover different items");
  PairedCounts counts;
  std::map<std::string, bool> seen;
  for (const auto& p : treatment) {
    const auto it = base.find(p.item_id);
    if (it == base.end()) throw Error("item " + p.item_id + " missing from baseline");
    if (!seen.emplace(p.item_id, true).second) throw Error("duplicate treatment id " + p.item_id);
    const double t = credit(p, rule);
    if (it->second == 0.0 && t == 1.0) ++counts.improved;
    if (it->second == 1.0 && t == 0.0) ++counts.regressed;
  }
  return counts;
}

double exact_sign_test(std::size_t improved, std::size_t regressed) {
  const std::size_t d = improved + regressed;
  if (d == 0) throw Error("no discordant pairs");
  const std::size_t low = std::min(improved, regressed);
  return std::min(1.0, 2.0 * stats::binomial_cdf(low, d, 0.5));
}

double weighted_average(std::span<const WeightedRow> rows) {
  if (rows.empty()) throw Error("no rows to average");
  double weighted = 0.0;
  double total = 0.0;
  for (const auto& row : rows) {
    if (row.n == 0) throw Error("row with n = 0");
    weighted += static_cast<double>(row.n) * row.accuracy;
    total += static_cast<double>(row.n);
  }
  return weighted / total;
}

MetricsReport compute_metrics(const std::string& method, std::span<const PredictionRecord> predictions,
                              const std::optional<std::string>& baseline_method,
                              std::span<const PredictionRecord> baseline) {
  MetricsReport m;
  m.method = method;
  m.n_items = predictions.size();
  m.micro_accuracy = micro_accuracy(predictions, Credit::TopHit);
  m.exact_top1_accuracy = micro_accuracy(predictions, Credit::ExactTop1);
  std::size_t winners = 0;
  std::size_t judged = 0;
  for (const auto& p : predictions) {
    if (p.error) {
      ++m.n_failed;
    } else {
      winners += p.winners.size();
      ++judged;
    }
  }
  m.mean_winner_set_size = judged ? static_cast<double>(winners) / static_cast<double>(judged) : 0.0;

  const bool all_sourced =
      std::all_of(predictions.begin(), predictions.end(), [](const auto& p) { return p.source.has_value(); });
  if (all_sourced) {
    auto macro = macro_by_source(predictions, Credit::TopHit);
    m.macro_by_source = macro.macro;
    m.per_source = std::move(macro.per_source);
  }

  if (baseline_method && *baseline_method != method) {
    m.baseline = baseline_method;
    m.paired = paired_comparison(baseline, predictions, Credit::TopHit);
    if (m.paired->improved + m.paired->regressed > 0) {
      m.sign_test_p = exact_sign_test(m.paired->improved, m.paired->regressed);
    }
  }
  return m;
}

}  // namespace pcf::eval
