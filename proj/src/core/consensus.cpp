#include "pcf/consensus.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace pcf {
namespace {

std::size_t checked_size(std::span<const RunVerdict> runs) {
  if (runs.empty()) throw Error("no runs");
  const std::size_t n = runs.front().size();
  for (const auto& run : runs) {
    if (run.size() != n) throw Error("inconsistent candidate count");
  }
  return n;
}

void check_ranking(std::span<const CandidateVerdict> candidates) {
  std::vector<bool> seen(candidates.size(), false);
  for (const auto& c : candidates) {
    if (c.rank < 1 || c.rank > candidates.size() || seen[c.rank - 1]) {
      throw ValidationError("invalid ranking");
    }
    seen[c.rank - 1] = true;
  }
}

// Sum in ascending order so that any reordering of the inputs yields the
// same bits.
double canonical_sum(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  double total = 0.0;
  for (double v : values) total += v;
  return total;
}

bool in_unit_range(double x) { return x >= 0.0 && x <= 1.0; }
bool in_score_range(double x) { return x >= 0.0 && x <= 100.0; }

}  // namespace

CandidateSet top_scoring_set(std::span<const CandidateVerdict> candidates) {
  CandidateSet top;
  if (candidates.empty()) return top;
  double best = candidates.front().score;
  for (const auto& c : candidates) best = std::max(best, c.score);
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (candidates[i].score == best) top.push_back(CandidateId{i});
  }
  return top;
}

RunVerdict make_run_verdict(std::size_t run_index, Permutation permutation,
                            std::vector<CandidateVerdict> candidates) {
  if (candidates.size() != permutation.size()) throw Error("inconsistent candidate count");
  for (const auto& c : candidates) {
    if (!in_score_range(c.score)) throw ValidationError("score out of range");
  }
  check_ranking(candidates);
  RunVerdict run{run_index, std::move(permutation), std::move(candidates), {}};
  run.top_set = top_scoring_set(run.candidates);
  return run;
}

std::vector<double> aggregate_mean_scores(std::span<const RunVerdict> runs) {
  const std::size_t n = checked_size(runs);
  std::vector<double> mean(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> scores;
    scores.reserve(runs.size());
    for (const auto& run : runs) {
      if (!in_score_range(run.candidates[i].score)) throw ValidationError("score out of range");
      scores.push_back(run.candidates[i].score);
    }
    mean[i] = std::clamp(canonical_sum(std::move(scores)) / static_cast<double>(runs.size()), 0.0, 100.0);
  }
  return mean;
}

std::vector<double> aggregate_borda(std::span<const RunVerdict> runs) {
  const std::size_t n = checked_size(runs);
  if (n < 2) throw Error("listwise requires ≥2 candidates");
  std::vector<std::size_t> points(n, 0);  // integer sums are exact
  for (const auto& run : runs) {
    check_ranking(run.candidates);
    for (std::size_t i = 0; i < n; ++i) points[i] += n - run.candidates[i].rank;
  }
  const double denominator = static_cast<double>(runs.size()) * static_cast<double>(n - 1);
  std::vector<double> borda(n);
  for (std::size_t i = 0; i < n; ++i) borda[i] = 100.0 * static_cast<double>(points[i]) / denominator;
  return borda;
}

std::vector<double> aggregate_top_vote(std::span<const RunVerdict> runs) {
  const std::size_t n = checked_size(runs);
  // votes[i][m] = number of runs where i shared the top with m-1 others.
  std::vector<std::map<std::size_t, std::size_t>> votes(n);
  for (const auto& run : runs) {
    if (run.top_set.empty()) throw Error("run missing top set");
    for (CandidateId id : run.top_set) {
      if (id.index >= n) throw Error("top set references unknown candidate");
      ++votes[id.index][run.top_set.size()];
    }
  }
  std::vector<double> share(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double total = 0.0;
    for (const auto& [tie_size, count] : votes[i]) {
      total += static_cast<double>(count) / static_cast<double>(tie_size);
    }
    share[i] = total / static_cast<double>(runs.size());
  }
  return share;
}

std::vector<double> aggregate_uncertainty(std::span<const RunVerdict> runs) {
  const std::size_t n = checked_size(runs);
  std::vector<double> share(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto flagged = std::count_if(runs.begin(), runs.end(), [i](const RunVerdict& run) {
      return run.candidates[i].calibrated_uncertainty;
    });
    share[i] = static_cast<double>(flagged) / static_cast<double>(runs.size());
  }
  return share;
}

double consensus_score(double mean_score, double borda, double top_vote, double uncertainty) {
  if (!in_score_range(mean_score) || !in_score_range(borda) || !in_unit_range(top_vote) ||
      !in_unit_range(uncertainty)) {
    throw Error("component out of range");
  }
  return ConsensusWeights::mean_score * mean_score + ConsensusWeights::borda * borda +
         ConsensusWeights::top_vote * (100.0 * top_vote) +
         ConsensusWeights::uncertainty * (100.0 * uncertainty);
}

std::vector<double> consensus_score(std::span<const double> mean_score, std::span<const double> borda,
                                    std::span<const double> top_vote,
                                    std::span<const double> uncertainty) {
  const std::size_t n = mean_score.size();
  if (borda.size() != n || top_vote.size() != n || uncertainty.size() != n) {
    throw Error("inconsistent candidate count");
  }
  std::vector<double> c(n);
  for (std::size_t i = 0; i < n; ++i) {
    c[i] = consensus_score(mean_score[i], borda[i], top_vote[i], uncertainty[i]);
  }
  return c;
}

CandidateSet select_winners(std::span<const double> consensus, double tolerance) {
  if (consensus.empty()) throw Error("no candidates");
  if (!(tolerance >= 0.0)) throw Error("tie tolerance must be non-negative");
  const double best = *std::max_element(consensus.begin(), consensus.end());
  CandidateSet winners;
  for (std::size_t i = 0; i < consensus.size(); ++i) {
    if (best - consensus[i] <= tolerance) winners.push_back(CandidateId{i});
  }
  return winners;
}

ConsensusSummary summarize(std::span<const RunVerdict> runs, double tolerance) {
  ConsensusSummary s;
  s.mean_score = aggregate_mean_scores(runs);
  s.borda = aggregate_borda(runs);
  s.top_vote = aggregate_top_vote(runs);
  s.uncertainty_share = aggregate_uncertainty(runs);
  s.consensus = consensus_score(s.mean_score, s.borda, s.top_vote, s.uncertainty_share);
  s.winners = select_winners(s.consensus, tolerance);
  s.k_used = runs.size();
  s.tolerance = tolerance;
  return s;
}

}  // namespace pcf
