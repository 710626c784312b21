#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <vector>

#include "pcf/consensus.hpp"
#include "pcf/rng.hpp"

namespace pcf::test {

/// A run in original order with identity permutation.
inline RunVerdict make_run(const std::vector<double>& scores, const std::vector<std::size_t>& ranks,
                           const std::vector<bool>& uncertain = {}, std::size_t run_index = 1) {
  std::vector<CandidateVerdict> c(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    c[i].score = scores[i];
    c[i].rank = ranks[i];
    c[i].calibrated_uncertainty = !uncertain.empty() && uncertain[i];
  }
  return make_run_verdict(run_index, Permutation::identity(scores.size()), std::move(c));
}

/// Ranks consistent with scores, ties broken by index.
inline std::vector<std::size_t> ranks_from_scores(const std::vector<double>& scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return scores[a] > scores[b]; });
  std::vector<std::size_t> ranks(scores.size());
  for (std::size_t p = 0; p < order.size(); ++p) ranks[order[p]] = p + 1;
  return ranks;
}

inline std::vector<std::size_t> random_permutation(std::size_t n, Rng& rng) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), std::size_t{0});
  for (std::size_t i = n - 1; i > 0; --i) std::swap(v[i], v[rng.below(i + 1)]);
  return v;
}

/// Random valid run. Scores are multiples of 0.5 so ties occur; ranks are a
/// random permutation unless `consistent`.
inline RunVerdict random_run(std::size_t n, Rng& rng, std::size_t run_index = 1, bool consistent = false) {
  std::vector<double> scores(n);
  std::vector<bool> uncertain(n);
  for (std::size_t i = 0; i < n; ++i) {
    scores[i] = 0.5 * static_cast<double>(rng.below(201));
    uncertain[i] = rng.bernoulli(0.3);
  }
  std::vector<std::size_t> ranks;
  if (consistent) {
    ranks = ranks_from_scores(scores);
  } else {
    for (std::size_t r : random_permutation(n, rng)) ranks.push_back(r + 1);
  }
  return make_run(scores, ranks, uncertain, run_index);
}

}  // namespace pcf::test
