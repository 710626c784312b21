#include "pcf/eval/predictions.hpp"

#include "pcf/errors.hpp"

namespace pcf::eval {

using nlohmann::json;

namespace {

json ids_to_json(const CandidateSet& ids) {
  json out = json::array();
  for (CandidateId id : ids) out.push_back(id.index);
  return out;
}

CandidateSet ids_from_json(const json& j) {
  CandidateSet ids;
  for (const json& v : j) ids.push_back(CandidateId{v.get<std::size_t>()});
  return ids;
}

}  // namespace

json to_json(const ConsensusSummary& s) {
  return {{"mean_score", s.mean_score},
          {"borda", s.borda},
          {"top_vote", s.top_vote},
          {"uncertainty_share", s.uncertainty_share},
          {"consensus", s.consensus},
          {"winners", ids_to_json(s.winners)},
          {"k_used", s.k_used},
          {"tolerance", s.tolerance}};
}

json to_json(const RunVerdict& run) {
  json candidates = json::array();
  for (const auto& c : run.candidates) {
    candidates.push_back({{"score", c.score},
                          {"rank", c.rank},
                          {"major_error", c.major_error},
                          {"hallucinated_specificity", c.halluc_specificity},
                          {"calibrated_uncertainty", c.calibrated_uncertainty},
                          {"rationale", c.rationale},
                          {"rationale_truncated", c.rationale_truncated}});
  }
  json perm = json::array();
  for (std::size_t original : run.permutation.mapping()) perm.push_back(original);
  return {{"run_index", run.run_index},
          {"permutation", perm},
          {"candidates", candidates},
          {"top_set", ids_to_json(run.top_set)}};
}

RunVerdict run_verdict_from_json(const json& j) {
  std::vector<CandidateVerdict> candidates;
  for (const json& c : j.at("candidates")) {
    candidates.push_back(CandidateVerdict{c.at("score").get<double>(),
                                          c.at("rank").get<std::size_t>(),
                                          c.at("major_error").get<bool>(),
                                          c.at("hallucinated_specificity").get<bool>(),
                                          c.at("calibrated_uncertainty").get<bool>(),
                                          c.at("rationale").get<std::string>(),
                                          c.value("rationale_truncated", false)});
  }
  RunVerdict run = make_run_verdict(j.at("run_index").get<std::size_t>(),
                                    Permutation(j.at("permutation").get<std::vector<std::size_t>>()),
                                    std::move(candidates));
  if (ids_from_json(j.at("top_set")) != run.top_set) throw Error("stored top set disagrees with scores");
  return run;
}

json to_json(const PcfJudgeResult& result) {
  json runs = json::array();
  for (const auto& run : result.runs) runs.push_back(to_json(run));
  json failures = json::array();
  for (const auto& f : result.failures) failures.push_back({{"run_index", f.run_index}, {"message", f.message}});
  return {{"summary", to_json(result.summary)}, {"runs", runs}, {"failures", failures}};
}

ConsensusSummary summary_from_trace(const json& trace) {
  std::vector<RunVerdict> runs;
  for (const json& r : trace.at("runs")) runs.push_back(run_verdict_from_json(r));
  return summarize(runs, trace.at("summary").at("tolerance").get<double>());
}

json to_json(const apoc::PairDecision& d) {
  json j = {{"baseline_winner", apoc::to_string(d.baseline_winner)},
            {"swapped_winner", apoc::to_string(d.swapped_winner)},
            {"order_consistent", d.order_consistent},
            {"final_winner", apoc::to_string(d.final_winner)},
            {"override_applied", d.override_applied},
            {"estimation_skipped", d.estimation_skipped},
            {"judge_calls", d.judge_calls}};
  if (d.keyed_winner) j["keyed_winner"] = apoc::to_string(*d.keyed_winner);
  if (d.resolved_answer) j["resolved_answer"] = *d.resolved_answer;
  if (d.keyed_error) j["keyed_error"] = *d.keyed_error;
  return j;
}

json to_json(const PredictionRecord& r) {
  json j = {{"id", r.item_id}, {"method", r.method}, {"winners", ids_to_json(r.winners)}, {"trace", r.trace}};
  if (r.gold) j["gold"] = *r.gold;
  if (r.source) j["source"] = *r.source;
  if (r.correct) j["correct"] = *r.correct;
  if (r.error) j["error"] = *r.error;
  return j;
}

PredictionRecord prediction_from_json(const json& j) {
  PredictionRecord r;
  r.item_id = j.at("id").get<std::string>();
  r.method = j.at("method").get<std::string>();
  r.winners = ids_from_json(j.at("winners"));
  if (j.contains("gold")) r.gold = j.at("gold").get<std::size_t>();
  if (j.contains("source")) r.source = j.at("source").get<std::string>();
  if (j.contains("correct")) r.correct = j.at("correct").get<bool>();
  if (j.contains("error")) r.error = j.at("error").get<std::string>();
  r.trace = j.value("trace", json(nullptr));
  return r;
}

namespace {

const std::filesystem::path& with_parent_dir(const std::filesystem::path& path) {
  std::error_code ec;  // a failure here surfaces when the stream opens
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  return path;
}

}  // namespace

PredictionWriter::PredictionWriter(const std::filesystem::path& path, bool truncate)
    : out_(with_parent_dir(path), truncate ? std::ios::trunc : std::ios::app) {
  if (!out_) throw Error("cannot open prediction file " + path.string());
}

void PredictionWriter::write(const PredictionRecord& record) {
  const std::string line = to_json(record).dump() + "\n";
  std::lock_guard lock(mutex_);
  out_ << line;
  out_.flush();
  if (!out_) throw Error("failed writing prediction record");
}

std::vector<PredictionRecord> read_predictions(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open prediction file " + path.string());
  std::vector<PredictionRecord> records;
  std::size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (line.empty()) continue;
    try {
      records.push_back(prediction_from_json(json::parse(line)));
    } catch (const json::exception& e) {
      throw Error(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return records;
}

}  // namespace pcf::eval
