#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pcf/apoc.hpp"
#include "pcf/eval/predictions.hpp"
#include "pcf/judge/gateway.hpp"

namespace pcf::eval {

struct ListwiseOptions {
  std::string method = "pcfjudge";
  std::size_t k = 7;
  std::uint64_t seed = kDefaultScheduleSeed;
  double tolerance = kDefaultTieTolerance;
  std::size_t parallelism = 1;  // items in flight
  /// Also emit a single-order record (the identity run alone) under this
  /// method name. The identity order is run 1 of every schedule, so this is
  /// the same decision a separate k = 1 pass would make.
  std::optional<std::string> direct_method;
};

/// Judges every item and returns records in item order. A failed item yields
/// a record with `error` set and no winners. When `writer` is given, records
/// are appended in item order as soon as each prefix completes.
std::vector<PredictionRecord> judge_listwise_dataset(const std::vector<EvalItem>& items,
                                                     const judge::ListwiseJudge& judge,
                                                     const ListwiseOptions& options,
                                                     PredictionWriter* writer = nullptr);

struct PairwiseOptions {
  std::string method = "apocjudge";
  std::optional<std::string> direct_method = "direct";  // baseline_winner records
  std::size_t parallelism = 1;
};

std::vector<PredictionRecord> judge_pairwise_dataset(const std::vector<apoc::PairItem>& items,
                                                     const apoc::PairwiseJudge& judge,
                                                     const apoc::EstimationDetector& is_estimation,
                                                     const PairwiseOptions& options,
                                                     PredictionWriter* writer = nullptr);

}  // namespace pcf::eval
