#include "pcf/judge/prompt.hpp"

#include "pcf/errors.hpp"

namespace pcf::judge {
namespace {

constexpr std::string_view kBlockOpen = "<candidate position=\"";
constexpr std::string_view kBlockClose = "\n</candidate>";

constexpr std::string_view kInstructions =
    R"(You are a skeptical fact-checker comparing several candidate answers to the same prompt.
Rank the candidates by FACTUAL RELIABILITY, not by helpfulness, length, polish or tone.

Guidelines:
- A major factual error is the most serious fault. Penalize it heavily.
- Penalize unsupported specificity: precise names, dates, numbers, settings or sources that
  the answer asserts without solid grounding. Confident invented detail is worse than omission.
- Calibrated uncertainty (stating plainly that evidence is limited, or that something cannot be
  known) is a weak positive signal, but only when it reflects appropriate caution. Evasive or
  unhelpful hedging earns no credit.
- Judge each candidate on its content. Its position in the list carries no information.

For EVERY candidate report five things:
  score                    number from 0 to 100 (higher = more factually reliable)
  rationale                one or two short sentences
  major_error              true if it contains a major factual error
  hallucinated_specificity true if it asserts unsupported specific details
  calibrated_uncertainty   true if it expresses appropriate, well-placed uncertainty
Then give a full ranking of all candidates, best first, with no ties.

Reply with exactly one fenced JSON block and nothing else inside it, in this shape:
```json
{"candidates": [{"position": 1, "score": 0, "rationale": "", "major_error": false,
                 "hallucinated_specificity": false, "calibrated_uncertainty": false}],
 "ranking": [1]}
```
Include one object per candidate position and list every position exactly once in "ranking".
)";

}  // namespace

std::string build_listwise_prompt(const EvalItem& item, const std::vector<std::string>& presented) {
  if (presented.size() < 2) throw Error("listwise requires ≥2 candidates");
  std::string out(kInstructions);
  out += "\n<prompt>\n";
  out += item.prompt;
  out += "\n</prompt>\n\nThere are " + std::to_string(presented.size()) + " candidates.\n";
  for (std::size_t p = 0; p < presented.size(); ++p) {
    if (presented[p].empty()) throw Error("candidate text is empty");
    out += "\n";
    out += kBlockOpen;
    out += std::to_string(p + 1) + "\">\n";
    out += presented[p];
    out += kBlockClose;
    out += "\n";
  }
  return out;
}

std::string build_corrective_prompt(std::string_view original_prompt, std::string_view problem) {
  std::string out(original_prompt);
  out += "\nYour previous reply was rejected: ";
  out += problem;
  out += "\nAnswer again. Follow the required JSON format exactly, score every candidate within "
         "0-100, and make the ranking list each position once.\n";
  return out;
}

std::vector<std::string> extract_candidate_blocks(std::string_view prompt) {
  std::vector<std::string> blocks;
  std::size_t cursor = 0;
  while ((cursor = prompt.find(kBlockOpen, cursor)) != std::string_view::npos) {
    const std::size_t body = prompt.find("\">\n", cursor);
    if (body == std::string_view::npos) break;
    const std::size_t start = body + 3;
    const std::size_t end = prompt.find(kBlockClose, start);
    if (end == std::string_view::npos) break;
    blocks.emplace_back(prompt.substr(start, end - start));
    cursor = end + kBlockClose.size();
  }
  return blocks;
}

}  // namespace pcf::judge
