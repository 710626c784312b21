#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "pcf/judge/gateway.hpp"

namespace pcf::judge {

/// Synthetic listwise judge with a known ground truth and a tunable
/// preference for whatever is shown first.
struct MockProfile {
  std::vector<double> latent_quality;  // per original candidate, [0, 100]
  double position_bias = 0.0;          // probability of inflating position 0
  double score_noise = 0.0;            // Gaussian sigma on the 0-100 scale
  double bias_margin = 15.0;           // lead given to an inflated candidate
  std::vector<bool> cautious;          // optional calibrated-uncertainty flags

  /// Throws Error on out-of-range parameters.
  void validate(std::size_t n) const;
};

/// Deterministic in (profile, item, order, seed). With probability
/// position_bias the candidate at presented position 0 is pushed strictly
/// above every other score; otherwise scores are latent quality plus noise,
/// clipped to [0, 100]. Ranking follows emitted scores, ties broken by
/// presented position.
ListwiseJudgeResponse mock_judge(const MockProfile& profile, const EvalItem& item,
                                 const Permutation& order, std::uint64_t seed);

struct MockJudgeSettings {
  double position_bias = 0.4;
  double score_noise = 5.0;
  double bias_margin = 15.0;
  double gold_quality = 75.0;
  double other_quality = 65.0;
  double other_step = 3.0;  // each further non-gold candidate sits this much lower
  std::uint64_t seed = 7;
};

/// Latent qualities from an item's gold label: gold at gold_quality, the
/// others at other_quality, other_quality - other_step, ... in original order.
/// Items without gold get other_quality everywhere.
MockProfile profile_from_gold(const EvalItem& item, const MockJudgeSettings& settings);

class MockListwiseJudge final : public ListwiseJudge {
 public:
  using ProfileFn = std::function<MockProfile(const EvalItem&)>;

  explicit MockListwiseJudge(MockJudgeSettings settings);
  MockListwiseJudge(ProfileFn profile, std::uint64_t seed)
      : profile_(std::move(profile)), seed_(seed) {}

  ListwiseJudgeResponse judge(const EvalItem& item, const Permutation& order) const override;

 private:
  ProfileFn profile_;
  std::uint64_t seed_;
};

}  // namespace pcf::judge
