#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "pcf/types.hpp"

namespace pcf::judge {

// Bump whenever the wording below changes; it is hashed into every cache key.
inline constexpr std::string_view kListwiseTemplateVersion = "listwise-factuality-v1";

/// Factuality-first listwise prompt. `presented` is the candidate list in the
/// order it should be shown; position labels run 1..n.
std::string build_listwise_prompt(const EvalItem& item, const std::vector<std::string>& presented);

/// Re-prompt after a rejected answer: the original prompt plus a note naming
/// what was wrong.
std::string build_corrective_prompt(std::string_view original_prompt, std::string_view problem);

/// Candidate texts in the order they appear in a listwise prompt.
std::vector<std::string> extract_candidate_blocks(std::string_view prompt);

}  // namespace pcf::judge
