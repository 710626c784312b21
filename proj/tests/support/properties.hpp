#pragma once

// Randomised property checks over the consensus rule and permutation
// plumbing. Shared by the unit tests and the acceptance binary; each check
// runs `cases` generated inputs and reports the first counterexample.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "pcf/consensus.hpp"
#include "pcf/permutation.hpp"

namespace pcf::test {

struct PropertyResult {
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::string first_failure;

  bool ok() const { return failures == 0 && cases > 0; }
  void fail(std::string what) {
    if (failures++ == 0) first_failure = std::move(what);
  }
};

inline std::vector<RunVerdict> random_runs(Rng& rng, std::size_t n, std::size_t k, bool consistent = false) {
  std::vector<RunVerdict> runs;
  for (std::size_t r = 0; r < k; ++r) runs.push_back(random_run(n, rng, r + 1, consistent));
  return runs;
}

inline PropertyResult check_run_order_invariance(std::size_t cases, std::uint64_t seed) {
  PropertyResult res;
  Rng rng(seed);
  for (std::size_t c = 0; c < cases; ++c, ++res.cases) {
    const std::size_t n = 2 + rng.below(7);
    const std::size_t k = 1 + rng.below(9);
    auto runs = random_runs(rng, n, k);
    const ConsensusSummary a = summarize(runs);
    const auto order = random_permutation(k, rng);
    std::vector<RunVerdict> shuffled;
    for (std::size_t i : order) shuffled.push_back(runs[i]);
    if (!(summarize(shuffled) == a)) res.fail("case " + std::to_string(c) + ": summary changed under run reordering");
  }
  return res;
}

inline PropertyResult check_vote_conservation(std::size_t cases, std::uint64_t seed) {
  PropertyResult res;
  Rng rng(seed);
  for (std::size_t c = 0; c < cases; ++c, ++res.cases) {
    const auto runs = random_runs(rng, 2 + rng.below(7), 1 + rng.below(9));
    const auto v = aggregate_top_vote(runs);
    double total = 0.0;
    for (double x : v) total += x;
    if (std::abs(total - 1.0) > 1e-9) {
      std::ostringstream os;
      os.precision(17);
      os << "case " << c << ": sum of top votes = " << total;
      res.fail(os.str());
    }
  }
  return res;
}

inline PropertyResult check_range_preservation(std::size_t cases, std::uint64_t seed) {
  PropertyResult res;
  Rng rng(seed);
  const auto in = [](double x, double lo, double hi) { return x >= lo && x <= hi; };
  for (std::size_t c = 0; c < cases; ++c, ++res.cases) {
    const auto s = summarize(random_runs(rng, 2 + rng.below(7), 1 + rng.below(9)));
    for (std::size_t i = 0; i < s.consensus.size(); ++i) {
      if (!in(s.mean_score[i], 0, 100) || !in(s.borda[i], 0, 100) || !in(s.consensus[i], 0, 100) ||
          !in(s.top_vote[i], 0, 1) || !in(s.uncertainty_share[i], 0, 1)) {
        res.fail("case " + std::to_string(c) + ": aggregate out of range for candidate " + std::to_string(i));
        break;
      }
    }
    if (s.winners.empty()) res.fail("case " + std::to_string(c) + ": empty winner set");
  }
  return res;
}

inline PropertyResult check_consensus_formula(std::size_t cases, std::uint64_t seed) {
  PropertyResult res;
  Rng rng(seed);
  for (std::size_t c = 0; c < cases; ++c, ++res.cases) {
    const auto s = summarize(random_runs(rng, 2 + rng.below(7), 1 + rng.below(9)));
    for (std::size_t i = 0; i < s.consensus.size(); ++i) {
      const double expected = 0.50 * s.mean_score[i] + 0.25 * s.borda[i] + 0.20 * (100.0 * s.top_vote[i]) +
                              0.05 * (100.0 * s.uncertainty_share[i]);
      if (s.consensus[i] != expected) {
        res.fail("case " + std::to_string(c) + ": consensus differs from 0.50/0.25/0.20/0.05 weighting");
        break;
      }
    }
  }
  return res;
}

inline PropertyResult check_remap_round_trip(std::size_t cases, std::uint64_t seed) {
  PropertyResult res;
  Rng rng(seed);
  for (std::size_t c = 0; c < cases; ++c, ++res.cases) {
    const std::size_t n = 1 + rng.below(8);
    const Permutation perm(random_permutation(n, rng));
    std::vector<double> original(n);
    for (auto& x : original) x = rng.uniform() * 100.0;
    // A judge that echoes what it is shown, position by position.
    const std::vector<double> presented = pcf::apply(perm, original);
    if (remap(perm, presented) != original) {
      res.fail("case " + std::to_string(c) + ": remap(apply(x)) != x for " + perm.to_string());
    }
    if (pcf::apply(perm, remap(perm, presented)) != presented) {
      res.fail("case " + std::to_string(c) + ": apply(remap(y)) != y for " + perm.to_string());
    }
    if (!(perm.inverse().inverse() == perm)) res.fail("case " + std::to_string(c) + ": inverse not involutive");
  }
  return res;
}

}  // namespace pcf::test
