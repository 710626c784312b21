#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pcf/judge/gateway.hpp"

namespace pcf::apoc {

enum class PairLabel { A, B, Tie };
enum class PairOrder { AB, BA };
enum class Slot { First, Second };

std::string_view to_string(PairLabel label);
std::string_view to_string(PairOrder order);
PairLabel flip(PairLabel label);

struct PairItem {
  std::string id;
  std::string question;
  std::string response_a;
  std::string response_b;
  std::optional<PairLabel> gold;  // A or B
  std::string source;

  /// Throws Error if a response is empty or gold is Tie.
  void validate() const;
};

/// Same pair with A and B exchanged (texts and gold).
PairItem swap_sides(const PairItem& item);

struct KeyedVerdict {
  PairLabel winner = PairLabel::Tie;
  std::string resolved_answer;
};

/// Pairwise judge backend. compare() must commit to one of the two shown
/// responses; keyed() may return Tie when its own answer supports neither.
class PairwiseJudge {
 public:
  virtual ~PairwiseJudge() = default;
  virtual Slot compare(const PairItem& item, PairOrder order) const = 0;
  virtual KeyedVerdict keyed(const PairItem& item) const = 0;
};

/// One ordered comparison, reported in original A/B labels.
PairLabel judge_pair_once(const PairItem& item, PairOrder order, const PairwiseJudge& judge);

KeyedVerdict keyed_judge(const PairItem& item, const PairwiseJudge& judge);

/// Case-insensitive phrase matcher for questions asking for an estimate or
/// ballpark figure.
class EstimationDetector {
 public:
  EstimationDetector() : EstimationDetector(default_patterns()) {}
  explicit EstimationDetector(std::vector<std::string> patterns);

  static std::vector<std::string> default_patterns();
  /// One pattern per line; blank lines and lines starting with '#' ignored.
  static EstimationDetector from_file(const std::filesystem::path& path);

  bool operator()(const PairItem& item) const;
  const std::vector<std::string>& patterns() const { return patterns_; }

 private:
  std::vector<std::string> patterns_;  // lower-cased
};

struct PairDecision {
  PairLabel baseline_winner = PairLabel::A;
  PairLabel swapped_winner = PairLabel::A;
  bool order_consistent = true;
  std::optional<PairLabel> keyed_winner;
  std::optional<std::string> resolved_answer;
  PairLabel final_winner = PairLabel::A;
  bool override_applied = false;
  bool estimation_skipped = false;
  std::size_t judge_calls = 0;
  std::optional<std::string> keyed_error;  // keyed judge failed, baseline kept
};

/// Order-swapped decision with keyed confirmation:
///   both orders agree          -> that winner, no keyed call
///   disagree, estimation item  -> baseline, keyed call skipped
///   disagree otherwise         -> swapped winner only if the keyed judge
///                                 names it, else baseline
/// Errors from either ordered call propagate; a keyed failure falls back to
/// the baseline and is recorded in keyed_error.
PairDecision run_apocjudge(const PairItem& item, const PairwiseJudge& judge,
                           const EstimationDetector& is_estimation);

/// The final winner departs from the baseline only through a confirmed
/// override, and the call budget is respected.
bool satisfies_keyed_gate(const PairDecision& decision);

// Gateway-backed judge ------------------------------------------------------

inline constexpr std::string_view kPairwiseTemplateVersion = "pairwise-compare-v1";
inline constexpr std::string_view kKeyedAnswerTemplateVersion = "keyed-answer-v1";
inline constexpr std::string_view kKeyedCompareTemplateVersion = "keyed-compare-v1";

std::string build_pairwise_prompt(const PairItem& item, PairOrder order);
std::string build_keyed_answer_prompt(const PairItem& item);
std::string build_keyed_compare_prompt(const PairItem& item, std::string_view resolved_answer);

/// {"winner": 1|2}
Slot parse_pairwise_response(std::string_view raw);
/// {"answer": "..."}
std::string parse_keyed_answer(std::string_view raw);
/// {"winner": "A"|"B"|"neither"}
PairLabel parse_keyed_verdict(std::string_view raw);

class GatewayPairwiseJudge final : public PairwiseJudge {
 public:
  explicit GatewayPairwiseJudge(std::shared_ptr<judge::JudgeGateway> gateway)
      : gateway_(std::move(gateway)) {}

  Slot compare(const PairItem& item, PairOrder order) const override;
  KeyedVerdict keyed(const PairItem& item) const override;

 private:
  std::shared_ptr<judge::JudgeGateway> gateway_;
};

// Synthetic judge ------------------------------------------------------------

struct MockPairSettings {
  double accuracy = 0.8;         // P(picks the gold response) when unbiased
  double position_bias = 0.2;    // P(picks whatever is shown first)
  double keyed_accuracy = 0.85;  // P(keyed judge names the gold response)
  double keyed_abstain = 0.05;   // P(keyed judge returns Tie)
  std::uint64_t seed = 11;
};

/// Draws depend on the presented texts rather than on A/B labels, so the
/// judge behaves identically on an item and its swap_sides() mirror.
class MockPairwiseJudge final : public PairwiseJudge {
 public:
  explicit MockPairwiseJudge(MockPairSettings settings);

  Slot compare(const PairItem& item, PairOrder order) const override;
  KeyedVerdict keyed(const PairItem& item) const override;

 private:
  MockPairSettings settings_;
};

}  // namespace pcf::apoc
