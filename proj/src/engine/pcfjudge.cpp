#include "pcf/pcfjudge.hpp"

#include <optional>

#include "pcf/judge/response.hpp"
#include "pcf/parallel.hpp"

namespace pcf {

std::size_t min_successful_runs(std::size_t k) { return std::min(k, (k + 1) / 2 + 1); }

PcfJudgeResult run_pcfjudge(const EvalItem& item, const PermutationSchedule& schedule,
                            const judge::ListwiseJudge& judge, double tolerance,
                            std::size_t parallelism) {
  if (item.size() < 2) throw Error("listwise requires ≥2 candidates");
  if (schedule.n != item.size() || schedule.permutations.size() != schedule.k) {
    throw Error("schedule does not match item " + item.id);
  }

  const std::size_t k = schedule.k;
  std::vector<std::optional<RunVerdict>> slots(k);
  std::vector<std::string> errors(k);
  parallel_for(k, parallelism, [&](std::size_t r) {
    const Permutation& order = schedule.permutations[r];
    try {
      slots[r] = judge::to_run_verdict(r + 1, order, judge.judge(item, order));
    } catch (const Error& e) {
      errors[r] = e.what();
    }
  });

  PcfJudgeResult result;
  for (std::size_t r = 0; r < k; ++r) {
    if (slots[r]) {
      result.runs.push_back(std::move(*slots[r]));
    } else {
      result.failures.push_back({r + 1, errors[r]});
    }
  }
  if (result.runs.size() < min_successful_runs(k)) {
    throw Error("insufficient runs for item " + item.id + ": " + std::to_string(result.runs.size()) +
                " of " + std::to_string(k) + " succeeded" +
                (result.failures.empty() ? "" : " (" + result.failures.front().message + ")"));
  }
  result.summary = summarize(result.runs, tolerance);
  return result;
}

}  // namespace pcf
