#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "pcf/consensus.hpp"
#include "pcf/permutation.hpp"

namespace pcf::judge {

/// What the judge says about the candidate at one presented position.
struct PresentedRecord {
  double score = 0.0;
  std::string rationale;
  bool major_error = false;
  bool halluc_specificity = false;
  bool calibrated_uncertainty = false;
  bool rationale_truncated = false;

  friend bool operator==(const PresentedRecord&, const PresentedRecord&) = default;
};

struct ListwiseJudgeResponse {
  std::vector<PresentedRecord> records;  // indexed by presented position
  std::vector<std::size_t> ranking;      // presented positions, best first (0-based)

  friend bool operator==(const ListwiseJudgeResponse&, const ListwiseJudgeResponse&) = default;
};

inline constexpr std::size_t kDefaultRationaleLimit = 600;

/// The single structured block of a judge reply: the body of the only fenced
/// code block, or the whole reply when it is a bare JSON object.
/// Throws ParseError when there is none or more than one.
std::string extract_structured_block(std::string_view raw);

/// Strict parse of a listwise reply for n presented candidates.
///
/// Structural problems (no block, invalid JSON, missing or mistyped fields)
/// raise ParseError. Content that parses but breaks the contract (record
/// count, positions, score outside [0,100], ranking not a permutation) raises
/// ValidationError. Nothing is repaired except over-long rationales, which are
/// cut at `rationale_limit` bytes on a UTF-8 boundary and flagged.
ListwiseJudgeResponse parse_listwise_response(std::string_view raw, std::size_t n,
                                              std::size_t rationale_limit = kDefaultRationaleLimit);

/// Wire form accepted by parse_listwise_response, wrapped in a ```json fence.
std::string render_listwise_response(const ListwiseJudgeResponse& response);

/// Maps a response for a presented order back onto original candidates.
RunVerdict to_run_verdict(std::size_t run_index, const Permutation& order,
                          const ListwiseJudgeResponse& response);

}  // namespace pcf::judge
