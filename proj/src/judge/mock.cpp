#include "pcf/judge/mock.hpp"

#include <algorithm>
#include <numeric>

#include "pcf/rng.hpp"

namespace pcf::judge {

void MockProfile::validate(std::size_t n) const {
  if (latent_quality.size() != n) throw Error("mock profile: latent quality size mismatch");
  for (double q : latent_quality) {
    if (!(q >= 0.0 && q <= 100.0)) throw Error("mock profile: latent quality outside [0,100]");
  }
  if (!(position_bias >= 0.0 && position_bias <= 1.0)) throw Error("mock profile: bias outside [0,1]");
  if (!(score_noise >= 0.0)) throw Error("mock profile: negative score noise");
  if (!(bias_margin > 0.0)) throw Error("mock profile: bias margin must be positive");
  if (!cautious.empty() && cautious.size() != n) throw Error("mock profile: cautious flag size mismatch");
}

ListwiseJudgeResponse mock_judge(const MockProfile& profile, const EvalItem& item,
                                 const Permutation& order, std::uint64_t seed) {
  const std::size_t n = order.size();
  if (item.size() != n) throw Error("mock judge: permutation does not match item");
  profile.validate(n);

  std::uint64_t run_seed = mix_seed(seed, hash_string(item.id));
  for (std::size_t original : order.mapping()) run_seed = mix_seed(run_seed, original);
  Rng rng(run_seed);

  std::vector<double> scores(n);
  for (std::size_t p = 0; p < n; ++p) {
    const double latent = profile.latent_quality[order.original_at(p)];
    scores[p] = std::clamp(latent + profile.score_noise * rng.normal(), 0.0, 100.0);
  }

  const bool biased = rng.bernoulli(profile.position_bias);
  if (biased) {
    const double rival = *std::max_element(scores.begin() + 1, scores.end());
    if (rival + profile.bias_margin <= 100.0) {
      scores[0] = std::max(scores[0], rival + profile.bias_margin);
    } else {
      // No headroom: pin the favourite at 100 and pull the rest below it.
      scores[0] = 100.0;
      for (std::size_t p = 1; p < n; ++p) scores[p] = std::min(scores[p], 100.0 - profile.bias_margin);
    }
  }

  ListwiseJudgeResponse out;
  out.records.resize(n);
  for (std::size_t p = 0; p < n; ++p) {
    const std::size_t original = order.original_at(p);
    auto& r = out.records[p];
    r.score = scores[p];
    r.major_error = scores[p] < 40.0;
    r.calibrated_uncertainty = !profile.cautious.empty() && profile.cautious[original];
    r.rationale = biased && p == 0 ? "mock: presentation-favoured" : "mock: latent quality";
  }
  out.ranking.resize(n);
  std::iota(out.ranking.begin(), out.ranking.end(), std::size_t{0});
  std::stable_sort(out.ranking.begin(), out.ranking.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  return out;
}

MockProfile profile_from_gold(const EvalItem& item, const MockJudgeSettings& settings) {
  MockProfile profile;
  profile.position_bias = settings.position_bias;
  profile.score_noise = settings.score_noise;
  profile.bias_margin = settings.bias_margin;
  profile.latent_quality.assign(item.size(), settings.other_quality);
  double next = settings.other_quality;
  for (std::size_t i = 0; i < item.size(); ++i) {
    if (item.gold_index && *item.gold_index == i) {
      profile.latent_quality[i] = settings.gold_quality;
    } else if (item.gold_index) {
      profile.latent_quality[i] = std::clamp(next, 0.0, 100.0);
      next -= settings.other_step;
    }
  }
  return profile;
}

MockListwiseJudge::MockListwiseJudge(MockJudgeSettings settings)
    : profile_([settings](const EvalItem& item) { return profile_from_gold(item, settings); }),
      seed_(settings.seed) {}

ListwiseJudgeResponse MockListwiseJudge::judge(const EvalItem& item, const Permutation& order) const {
  return mock_judge(profile_(item), item, order, seed_);
}

}  // namespace pcf::judge
