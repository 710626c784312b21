#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "pcf/permutation.hpp"
#include "pcf/types.hpp"

namespace pcf {

/// One candidate's judgment within a single run, already attributed to the
/// original candidate.
struct CandidateVerdict {
  double score = 0.0;     // [0, 100]
  std::size_t rank = 0;   // 1 = best
  bool major_error = false;
  bool halluc_specificity = false;
  bool calibrated_uncertainty = false;
  std::string rationale;
  bool rationale_truncated = false;
};

/// A permutation run mapped back to original order.
struct RunVerdict {
  std::size_t run_index = 0;  // 1-based position in the schedule
  Permutation permutation;
  std::vector<CandidateVerdict> candidates;
  CandidateSet top_set;  // every candidate tied at the run's max score

  std::size_t size() const { return candidates.size(); }
};

/// Candidates whose score equals the run maximum.
CandidateSet top_scoring_set(std::span<const CandidateVerdict> candidates);

/// Builds a verdict and fills top_set. Throws ValidationError on a broken
/// ranking or out-of-range score.
RunVerdict make_run_verdict(std::size_t run_index, Permutation permutation,
                            std::vector<CandidateVerdict> candidates);

/// Consensus weights. They sum to one, so C stays on the 0-100 scale.
struct ConsensusWeights {
  static constexpr double mean_score = 0.50;
  static constexpr double borda = 0.25;
  static constexpr double top_vote = 0.20;
  static constexpr double uncertainty = 0.05;
};

inline constexpr double kDefaultTieTolerance = 0.5;

// Per-candidate aggregates over K runs. Each throws Error on an empty run list
// or a candidate-count mismatch between runs. Sums are taken in a canonical
// order so the result does not depend on the order of `runs`.
std::vector<double> aggregate_mean_scores(std::span<const RunVerdict> runs);
std::vector<double> aggregate_borda(std::span<const RunVerdict> runs);
std::vector<double> aggregate_top_vote(std::span<const RunVerdict> runs);
std::vector<double> aggregate_uncertainty(std::span<const RunVerdict> runs);

double consensus_score(double mean_score, double borda, double top_vote, double uncertainty);
std::vector<double> consensus_score(std::span<const double> mean_score, std::span<const double> borda,
                                    std::span<const double> top_vote,
                                    std::span<const double> uncertainty);

/// { i : max_j C_j - C_i <= tolerance }.
CandidateSet select_winners(std::span<const double> consensus, double tolerance);

struct ConsensusSummary {
  std::vector<double> mean_score;
  std::vector<double> borda;
  std::vector<double> top_vote;
  std::vector<double> uncertainty_share;
  std::vector<double> consensus;
  CandidateSet winners;
  std::size_t k_used = 0;
  double tolerance = kDefaultTieTolerance;

  friend bool operator==(const ConsensusSummary&, const ConsensusSummary&) = default;
};

ConsensusSummary summarize(std::span<const RunVerdict> runs, double tolerance = kDefaultTieTolerance);

}  // namespace pcf
