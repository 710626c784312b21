#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace pcf::sim {

/// Order-noisy judge for Monte Carlo checks. Candidate 0 is the true best.
/// Each run tops candidate 0 with probability q, otherwise a wrong candidate
/// drawn from off_target.
///
/// Scores (an extension beyond the top-choice model, needed to exercise the
/// full consensus rule): candidate 0 has latent base_score + margin, the rest
/// base_score; every score gets N(0, score_noise) noise and is clipped to
/// [0, 100]; the run's top choice is then lifted top_gap above the rest so
/// that it alone holds the run maximum.
struct SyntheticJudgeModel {
  double q = 0.7;
  std::size_t n = 4;
  std::vector<double> off_target;  // weights over candidates 1..n-1; empty = uniform
  double score_noise = 5.0;
  double base_score = 60.0;
  double margin = 10.0;
  double top_gap = 5.0;
  double tolerance = 0.5;  // consensus tie tolerance

  /// Throws Error on an invalid model.
  void validate() const;
};

struct SimulationResult {
  std::size_t k = 0;
  std::size_t trials = 0;
  std::size_t majority_failures = 0;   // trials with sum Z_r <= k/2
  std::size_t consensus_failures = 0;  // trials where winners != {0}
  double empirical_majority_error = 0.0;
  double empirical_consensus_error = 0.0;
  double hoeffding_bound = 0.0;
  std::optional<double> exact_majority_error;  // odd k only

  /// Binomial standard error of an empirical rate.
  double majority_stderr() const;
  double consensus_stderr() const;
};

/// exp(-2 k (q - 1/2)^2). Throws Error("bound requires q > 1/2") for q <= 1/2.
double hoeffding_bound(double q, std::size_t k);

/// P(sum of k Bernoulli(q) <= k/2) for odd k. Throws Error for even k.
double exact_majority_error(double q, std::size_t k);

inline constexpr std::uint64_t kDefaultSimulationSeed = 12345;

/// Deterministic in (model, k, trials, seed) and independent of `workers`.
SimulationResult simulate(const SyntheticJudgeModel& model, std::size_t k, std::size_t trials,
                          std::uint64_t seed, std::size_t workers = 1);

}  // namespace pcf::sim
