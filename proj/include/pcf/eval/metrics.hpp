#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pcf/eval/predictions.hpp"

namespace pcf::eval {

enum class Credit {
  ExactTop1,  // winner set is exactly {gold}
  TopHit,     // gold is in the winner set
};

/// 1 or 0 for one prediction. Throws Error when gold is missing.
double credit(const PredictionRecord& prediction, Credit rule);

double micro_accuracy(std::span<const PredictionRecord> predictions, Credit rule = Credit::TopHit);

struct SourceAccuracy {
  std::string source;
  std::size_t n = 0;
  double accuracy = 0.0;
};

struct MacroAccuracy {
  double macro = 0.0;                   // unweighted mean over buckets
  std::vector<SourceAccuracy> per_source;  // sorted by source name
};

MacroAccuracy macro_by_source(std::span<const PredictionRecord> predictions,
                              Credit rule = Credit::TopHit);

struct PairedCounts {
  std::size_t improved = 0;   // baseline wrong, treatment right
  std::size_t regressed = 0;  // baseline right, treatment wrong
};

/// Matches items by id; both runs must cover the same ids.
PairedCounts paired_comparison(std::span<const PredictionRecord> baseline,
                               std::span<const PredictionRecord> treatment, Credit rule = Credit::TopHit);

/// Two-sided exact sign test over the discordant pairs:
/// min(1, 2 * P(X <= min(improved, regressed))), X ~ Binomial(d, 1/2).
double exact_sign_test(std::size_t improved, std::size_t regressed);

struct WeightedRow {
  std::size_t n = 0;
  double accuracy = 0.0;
};

/// sum(n_i * acc_i) / sum(n_i).
double weighted_average(std::span<const WeightedRow> rows);

struct MetricsReport {
  std::string method;
  std::size_t n_items = 0;
  std::size_t n_failed = 0;
  double micro_accuracy = 0.0;      // top-hit
  double exact_top1_accuracy = 0.0;
  double mean_winner_set_size = 0.0;
  std::optional<double> macro_by_source;
  std::vector<SourceAccuracy> per_source;
  std::optional<std::string> baseline;
  std::optional<PairedCounts> paired;
  std::optional<double> sign_test_p;
};

/// Metrics for one method; paired counts and the sign test are filled in
/// when a baseline run is given. Macro accuracy is reported only when every
/// prediction carries a source.
MetricsReport compute_metrics(const std::string& method, std::span<const PredictionRecord> predictions,
                              const std::optional<std::string>& baseline_method = std::nullopt,
                              std::span<const PredictionRecord> baseline = {});

}  // namespace pcf::eval
