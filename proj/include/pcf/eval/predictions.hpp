#pragma once

#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pcf/apoc.hpp"
#include "pcf/consensus.hpp"
#include "pcf/pcfjudge.hpp"

namespace pcf::eval {

/// One line of a prediction file. For pairwise methods candidate 0 is A and
/// 1 is B.
struct PredictionRecord {
  std::string item_id;
  std::string method;
  CandidateSet winners;  // empty when the item failed
  std::optional<std::size_t> gold;
  std::optional<std::string> source;
  std::optional<bool> correct;  // top-hit credit; present iff gold is
  std::optional<std::string> error;
  nlohmann::json trace;  // ConsensusSummary + runs, or PairDecision

  friend bool operator==(const PredictionRecord&, const PredictionRecord&) = default;
};

nlohmann::json to_json(const PredictionRecord& record);
PredictionRecord prediction_from_json(const nlohmann::json& j);

nlohmann::json to_json(const ConsensusSummary& summary);
nlohmann::json to_json(const RunVerdict& run);
RunVerdict run_verdict_from_json(const nlohmann::json& j);
nlohmann::json to_json(const PcfJudgeResult& result);
nlohmann::json to_json(const apoc::PairDecision& decision);

/// Re-runs aggregation over the runs stored in a listwise trace.
ConsensusSummary summary_from_trace(const nlohmann::json& trace);

/// Append-only JSONL writer; safe to call from several threads.
class PredictionWriter {
 public:
  explicit PredictionWriter(const std::filesystem::path& path, bool truncate = false);
  void write(const PredictionRecord& record);

 private:
  std::mutex mutex_;
  std::ofstream out_;
};

std::vector<PredictionRecord> read_predictions(const std::filesystem::path& path);

}  // namespace pcf::eval
