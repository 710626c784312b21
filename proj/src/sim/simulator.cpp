#include "pcf/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pcf/consensus.hpp"
#include "pcf/errors.hpp"
#include "pcf/parallel.hpp"
#include "pcf/rng.hpp"
#include "pcf/stats.hpp"

namespace pcf::sim {
namespace {

struct TrialOutcome {
  bool majority_failed = false;
  bool consensus_failed = false;
};

std::size_t draw_off_target(Rng& rng, const std::vector<double>& cumulative) {
  const double u = rng.uniform() * cumulative.back();
  const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
  return 1 + static_cast<std::size_t>(std::min<std::ptrdiff_t>(it - cumulative.begin(),
                                                              static_cast<std::ptrdiff_t>(cumulative.size()) - 1));
}

RunVerdict synthetic_run(const SyntheticJudgeModel& model, std::size_t run_index, std::size_t top,
                         Rng& rng) {
  const std::size_t n = model.n;
  std::vector<double> scores(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double latent = model.base_score + (i == 0 ? model.margin : 0.0);
    scores[i] = std::clamp(latent + model.score_noise * rng.normal(), 0.0, 100.0);
  }
  double rival = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i != top) rival = std::max(rival, scores[i]);
  }
  if (rival + model.top_gap <= 100.0) {
    scores[top] = std::max(scores[top], rival + model.top_gap);
  } else {
    scores[top] = 100.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (i != top) scores[i] = std::min(scores[i], 100.0 - model.top_gap);
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  std::vector<CandidateVerdict> candidates(n);
  for (std::size_t place = 0; place < n; ++place) {
    candidates[order[place]].score = scores[order[place]];
    candidates[order[place]].rank = place + 1;
  }
  return make_run_verdict(run_index, Permutation::identity(n), std::move(candidates));
}

TrialOutcome run_trial(const SyntheticJudgeModel& model, const std::vector<double>& cumulative, std::size_t k,
                       Rng& rng) {
  std::vector<RunVerdict> runs;
  runs.reserve(k);
  std::size_t hits = 0;
  for (std::size_t r = 0; r < k; ++r) {
    const bool hit = rng.bernoulli(model.q);
    hits += hit ? 1 : 0;
    const std::size_t top = hit ? 0 : draw_off_target(rng, cumulative);
    runs.push_back(synthetic_run(model, r + 1, top, rng));
  }
  TrialOutcome out;
  out.majority_failed = 2 * hits <= k;
  const ConsensusSummary summary = summarize(runs, model.tolerance);
  out.consensus_failed = summary.winners != CandidateSet{CandidateId{0}};
  return out;
}

}  // namespace

void SyntheticJudgeModel::validate() const {
  if (!(q >= 0.0 && q <= 1.0)) throw Error("q must lie in [0,1]");
  if (n < 2) throw Error("listwise requires ≥2 candidates");
  if (!off_target.empty()) {
    if (off_target.size() != n - 1) throw Error("off_target needs one weight per non-best candidate");
    double total = 0.0;
    for (double w : off_target) {
      if (!(w >= 0.0)) throw Error("off_target weights must be non-negative");
      total += w;
    }
    if (std::abs(total - 1.0) > 1e-9) throw Error("off_target weights must sum to 1");
  }
  if (!(score_noise >= 0.0)) throw Error("score noise must be >= 0");
  if (!(base_score >= 0.0 && base_score + margin <= 100.0 && margin >= 0.0)) {
    throw Error("base_score + margin must stay within [0,100]");
  }
  if (!(top_gap > 0.0 && top_gap < 100.0)) throw Error("top_gap must lie in (0,100)");
  if (!(tolerance >= 0.0)) throw Error("tolerance must be >= 0");
}

double SimulationResult::majority_stderr() const {
  const double p = empirical_majority_error;
  return std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

double SimulationResult::consensus_stderr() const {
  const double p = empirical_consensus_error;
  return std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

double hoeffding_bound(double q, std::size_t k) {
  if (!(q > 0.5 && q <= 1.0)) throw Error("bound requires q > 1/2");
  if (k < 1) throw Error("k must be >= 1");
  const double gap = q - 0.5;
  return std::exp(-2.0 * static_cast<double>(k) * gap * gap);
}

double exact_majority_error(double q, std::size_t k) {
  if (k % 2 == 0) throw Error("exact majority error requires odd k");
  if (!(q >= 0.0 && q <= 1.0)) throw Error("q must lie in [0,1]");
  return stats::binomial_cdf((k - 1) / 2, k, q);
}

SimulationResult simulate(const SyntheticJudgeModel& model, std::size_t k, std::size_t trials,
                          std::uint64_t seed, std::size_t workers) {
  model.validate();
  if (k < 1) throw Error("k must be >= 1");
  if (trials < 1) throw Error("trials must be >= 1");

  std::vector<double> cumulative(model.n - 1, 1.0);
  if (!model.off_target.empty()) std::copy(model.off_target.begin(), model.off_target.end(), cumulative.begin());
  std::partial_sum(cumulative.begin(), cumulative.end(), cumulative.begin());

  // Fixed-size chunks with per-chunk seeds keep the result independent of
  // the worker count.
  constexpr std::size_t kChunk = 4096;
  const std::size_t chunks = (trials + kChunk - 1) / kChunk;
  std::vector<std::size_t> majority(chunks, 0);
  std::vector<std::size_t> consensus(chunks, 0);
  parallel_for(chunks, workers, [&](std::size_t c) {
    Rng rng(mix_seed(seed, c));
    const std::size_t end = std::min(trials, (c + 1) * kChunk);
    for (std::size_t t = c * kChunk; t < end; ++t) {
      const TrialOutcome o = run_trial(model, cumulative, k, rng);
      majority[c] += o.majority_failed ? 1 : 0;
      consensus[c] += o.consensus_failed ? 1 : 0;
    }
  });

  SimulationResult result;
  result.k = k;
  result.trials = trials;
  result.majority_failures = std::accumulate(majority.begin(), majority.end(), std::size_t{0});
  result.consensus_failures = std::accumulate(consensus.begin(), consensus.end(), std::size_t{0});
  result.empirical_majority_error = static_cast<double>(result.majority_failures) / static_cast<double>(trials);
  result.empirical_consensus_error = static_cast<double>(result.consensus_failures) / static_cast<double>(trials);
  result.hoeffding_bound = model.q > 0.5 ? hoeffding_bound(model.q, k) : 1.0;
  if (k % 2 == 1) result.exact_majority_error = exact_majority_error(model.q, k);
  return result;
}

}  // namespace pcf::sim
