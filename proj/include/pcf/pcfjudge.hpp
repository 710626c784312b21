#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "pcf/consensus.hpp"
#include "pcf/judge/gateway.hpp"
#include "pcf/permutation.hpp"
#include "pcf/types.hpp"

namespace pcf {

struct RunFailure {
  std::size_t run_index = 0;
  std::string message;
};

struct PcfJudgeResult {
  ConsensusSummary summary;
  std::vector<RunVerdict> runs;      // successful runs, in schedule order
  std::vector<RunFailure> failures;  // dropped runs
};

/// Surviving runs needed before an item is aggregated: ceil(k/2) + 1,
/// capped at k so that k = 1 remains usable.
std::size_t min_successful_runs(std::size_t k);

/// Judges `item` once per permutation in `schedule`, maps every reply back to
/// original candidates and aggregates the survivors. A failing run (any
/// pcf::Error from the judge) is dropped and recorded; fewer than
/// min_successful_runs(k) survivors throws Error("insufficient runs").
PcfJudgeResult run_pcfjudge(const EvalItem& item, const PermutationSchedule& schedule,
                            const judge::ListwiseJudge& judge, double tolerance = kDefaultTieTolerance,
                            std::size_t parallelism = 1);

}  // namespace pcf
