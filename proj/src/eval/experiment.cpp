#include "pcf/eval/experiment.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <optional>

#include "pcf/parallel.hpp"

namespace pcf::eval {
namespace {

// Hands finished records to the writer in item order.
class OrderedSink {
 public:
  OrderedSink(std::size_t count, PredictionWriter* writer) : slots_(count), writer_(writer) {}

  void put(std::size_t index, std::vector<PredictionRecord> records) {
    std::lock_guard lock(mutex_);
    slots_[index] = std::move(records);
    while (next_ < slots_.size() && slots_[next_]) {
      if (writer_) {
        for (const auto& r : *slots_[next_]) writer_->write(r);
      }
      ++next_;
    }
  }

  std::vector<PredictionRecord> take() {
    std::vector<PredictionRecord> out;
    for (auto& slot : slots_) {
      if (slot) std::move(slot->begin(), slot->end(), std::back_inserter(out));
    }
    return out;
  }

 private:
  std::mutex mutex_;
  std::vector<std::optional<std::vector<PredictionRecord>>> slots_;
  std::size_t next_ = 0;
  PredictionWriter* writer_;
};

PredictionRecord listwise_record(const EvalItem& item, const std::string& method) {
  PredictionRecord r;
  r.item_id = item.id;
  r.method = method;
  r.gold = item.gold_index;
  r.source = item.source;
  return r;
}

void score(PredictionRecord& r) {
  if (r.gold) {
    r.correct = std::find(r.winners.begin(), r.winners.end(), CandidateId{*r.gold}) != r.winners.end();
  }
}

}  // namespace

std::vector<PredictionRecord> judge_listwise_dataset(const std::vector<EvalItem>& items,
                                                     const judge::ListwiseJudge& judge,
                                                     const ListwiseOptions& options,
                                                     PredictionWriter* writer) {
  // One global schedule per candidate count, shared by all items.
  std::map<std::size_t, PermutationSchedule> schedules;
  for (const auto& item : items) {
    if (!schedules.contains(item.size())) {
      schedules.emplace(item.size(), build_schedule(item.size(), options.k, options.seed));
    }
  }

  OrderedSink sink(items.size(), writer);
  parallel_for(items.size(), options.parallelism, [&](std::size_t i) {
    const EvalItem& item = items[i];
    std::vector<PredictionRecord> out;
    PredictionRecord main = listwise_record(item, options.method);
    std::optional<PredictionRecord> direct;
    if (options.direct_method) direct = listwise_record(item, *options.direct_method);
    try {
      const PcfJudgeResult result = run_pcfjudge(item, schedules.at(item.size()), judge, options.tolerance);
      main.winners = result.summary.winners;
      main.trace = to_json(result);
      if (direct) {
        if (!result.runs.empty() && result.runs.front().run_index == 1) {
          PcfJudgeResult single;
          single.runs = {result.runs.front()};
          single.summary = summarize(single.runs, options.tolerance);
          direct->winners = single.summary.winners;
          direct->trace = to_json(single);
        } else {
          direct->error = "canonical-order run failed";
        }
      }
    } catch (const Error& e) {
      main.error = e.what();
      if (direct) direct->error = e.what();
    }
    score(main);
    if (direct) {
      score(*direct);
      out.push_back(std::move(*direct));
    }
    out.push_back(std::move(main));
    sink.put(i, std::move(out));
  });
  return sink.take();
}

std::vector<PredictionRecord> judge_pairwise_dataset(const std::vector<apoc::PairItem>& items,
                                                     const apoc::PairwiseJudge& judge,
                                                     const apoc::EstimationDetector& is_estimation,
                                                     const PairwiseOptions& options,
                                                     PredictionWriter* writer) {
  const auto to_set = [](apoc::PairLabel label) {
    if (label == apoc::PairLabel::A) return CandidateSet{CandidateId{0}};
    if (label == apoc::PairLabel::B) return CandidateSet{CandidateId{1}};
    return CandidateSet{CandidateId{0}, CandidateId{1}};
  };

  OrderedSink sink(items.size(), writer);
  parallel_for(items.size(), options.parallelism, [&](std::size_t i) {
    const apoc::PairItem& item = items[i];
    PredictionRecord main;
    main.item_id = item.id;
    main.method = options.method;
    if (item.gold) main.gold = *item.gold == apoc::PairLabel::A ? 0 : 1;
    if (!item.source.empty()) main.source = item.source;
    std::optional<PredictionRecord> direct;
    if (options.direct_method) {
      direct = main;
      direct->method = *options.direct_method;
    }
    try {
      const apoc::PairDecision d = apoc::run_apocjudge(item, judge, is_estimation);
      main.winners = to_set(d.final_winner);
      main.trace = to_json(d);
      if (direct) {
        direct->winners = to_set(d.baseline_winner);
        direct->trace = {{"baseline_winner", apoc::to_string(d.baseline_winner)}};
      }
    } catch (const Error& e) {
      main.error = e.what();
      if (direct) direct->error = e.what();
    }
    std::vector<PredictionRecord> out;
    score(main);
    if (direct) {
      score(*direct);
      out.push_back(std::move(*direct));
    }
    out.push_back(std::move(main));
    sink.put(i, std::move(out));
  });
  return sink.take();
}

}  // namespace pcf::eval
