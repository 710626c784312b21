#include "pcf/apoc.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>

#include <json.hpp>

#include "pcf/errors.hpp"
#include "pcf/judge/response.hpp"
#include "pcf/rng.hpp"

namespace pcf::apoc {
namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

PairLabel label_of(Slot slot, PairOrder order) {
  const bool first = slot == Slot::First;
  if (order == PairOrder::AB) return first ? PairLabel::A : PairLabel::B;
  return first ? PairLabel::B : PairLabel::A;
}

}  // namespace

std::string_view to_string(PairLabel label) {
  switch (label) {
    case PairLabel::A: return "A";
    case PairLabel::B: return "B";
    case PairLabel::Tie: return "tie";
  }
  return "?";
}

std::string_view to_string(PairOrder order) { return order == PairOrder::AB ? "AB" : "BA"; }

PairLabel flip(PairLabel label) {
  if (label == PairLabel::A) return PairLabel::B;
  if (label == PairLabel::B) return PairLabel::A;
  return PairLabel::Tie;
}

void PairItem::validate() const {
  if (response_a.empty() || response_b.empty()) throw Error("pair " + id + ": empty response");
  if (gold && *gold == PairLabel::Tie) throw Error("pair " + id + ": gold label must be A>B or B>A");
}

PairItem swap_sides(const PairItem& item) {
  PairItem out = item;
  std::swap(out.response_a, out.response_b);
  if (out.gold) out.gold = flip(*out.gold);
  return out;
}

PairLabel judge_pair_once(const PairItem& item, PairOrder order, const PairwiseJudge& judge) {
  item.validate();
  return label_of(judge.compare(item, order), order);
}

KeyedVerdict keyed_judge(const PairItem& item, const PairwiseJudge& judge) {
  item.validate();
  return judge.keyed(item);
}

EstimationDetector::EstimationDetector(std::vector<std::string> patterns) {
  for (auto& p : patterns) {
    if (!p.empty()) patterns_.push_back(lower(p));
  }
}

std::vector<std::string> EstimationDetector::default_patterns() {
  return {"estimate", "approximately", "approximate value", "roughly", "ballpark",
          "order of magnitude", "rough guess", "best guess", "give or take"};
}

EstimationDetector EstimationDetector::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read estimation patterns " + path.string());
  std::vector<std::string> patterns;
  for (std::string line; std::getline(in, line);) {
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) line.pop_back();
    const auto start = line.find_first_not_of(" \t");
    if (start == std::string::npos || line[start] == '#') continue;
    patterns.push_back(line.substr(start));
  }
  return EstimationDetector(std::move(patterns));
}

bool EstimationDetector::operator()(const PairItem& item) const {
  const std::string question = lower(item.question);
  return std::any_of(patterns_.begin(), patterns_.end(),
                     [&](const std::string& p) { return question.find(p) != std::string::npos; });
}

PairDecision run_apocjudge(const PairItem& item, const PairwiseJudge& judge,
                           const EstimationDetector& is_estimation) {
  PairDecision d;
  d.baseline_winner = judge_pair_once(item, PairOrder::AB, judge);
  ++d.judge_calls;
  d.swapped_winner = judge_pair_once(item, PairOrder::BA, judge);
  ++d.judge_calls;
  d.order_consistent = d.baseline_winner == d.swapped_winner;
  d.final_winner = d.baseline_winner;
  if (d.order_consistent) return d;

  if (is_estimation(item)) {
    d.estimation_skipped = true;
    return d;
  }

  ++d.judge_calls;
  try {
    KeyedVerdict keyed = keyed_judge(item, judge);
    d.keyed_winner = keyed.winner;
    d.resolved_answer = std::move(keyed.resolved_answer);
  } catch (const Error& e) {
    d.keyed_error = e.what();
    return d;
  }
  if (d.keyed_winner == d.swapped_winner) {
    d.final_winner = d.swapped_winner;
    d.override_applied = true;
  }
  return d;
}

bool satisfies_keyed_gate(const PairDecision& d) {
  if (d.judge_calls > 3) return false;
  if (d.order_consistent != (d.baseline_winner == d.swapped_winner)) return false;
  if (d.final_winner != d.baseline_winner) {
    if (d.order_consistent || d.estimation_skipped) return false;
    if (!d.keyed_winner || *d.keyed_winner != d.swapped_winner) return false;
  }
  if (d.override_applied && (!d.keyed_winner || *d.keyed_winner != d.final_winner)) return false;
  if (d.estimation_skipped && (d.final_winner != d.baseline_winner || d.keyed_winner)) return false;
  return true;
}

// Gateway-backed judge ------------------------------------------------------

namespace {

using nlohmann::json;

json parse_block(std::string_view raw) {
  const json root = json::parse(judge::extract_structured_block(raw), nullptr, false);
  if (root.is_discarded() || !root.is_object()) throw ParseError("structured block is not a JSON object");
  return root;
}

std::string response_block(std::string_view label, std::string_view text) {
  std::string out = "<response label=\"";
  out += label;
  out += "\">\n";
  out += text;
  out += "\n</response>\n";
  return out;
}

std::string corrective_note(std::string_view prompt, std::string_view problem) {
  std::string out(prompt);
  out += "\nYour previous reply was rejected: ";
  out += problem;
  out += "\nAnswer again using exactly the JSON format requested above.\n";
  return out;
}

template <class Parser>
auto call_with_correction(judge::JudgeGateway& gateway, const std::string& prompt,
                          std::string_view version, Parser parse) {
  try {
    return parse(gateway.call_judge(prompt, version));
  } catch (const ParseError& e) {
    return parse(gateway.call_judge(corrective_note(prompt, e.what()), version));
  } catch (const ValidationError& e) {
    return parse(gateway.call_judge(corrective_note(prompt, e.what()), version));
  }
}

}  // namespace

std::string build_pairwise_prompt(const PairItem& item, PairOrder order) {
  const bool ab = order == PairOrder::AB;
  std::string out =
      "You are judging which of two responses answers the question correctly.\n"
      "Focus on objective correctness. The order of the responses carries no information.\n"
      "You must pick exactly one response; ties are not allowed.\n\n"
      "<question>\n" + item.question + "\n</question>\n\n";
  out += response_block("1", ab ? item.response_a : item.response_b);
  out += "\n";
  out += response_block("2", ab ? item.response_b : item.response_a);
  out += "\nReply with exactly one fenced JSON block:\n"
         "```json\n{\"winner\": 1, \"rationale\": \"\"}\n```\n"
         "where winner is 1 or 2.\n";
  return out;
}

std::string build_keyed_answer_prompt(const PairItem& item) {
  return "Solve the following question yourself, carefully and step by step, before looking at "
         "any candidate answers.\n\n<question>\n" +
         item.question +
         "\n</question>\n\nReply with exactly one fenced JSON block:\n"
         "```json\n{\"answer\": \"<your final answer>\"}\n```\n";
}

std::string build_keyed_compare_prompt(const PairItem& item, std::string_view resolved_answer) {
  std::string out =
      "A reference answer to the question below has already been worked out. Decide which response "
      "agrees with the reference answer. If neither does, say so.\n\n<question>\n" +
      item.question + "\n</question>\n\n<reference>\n" + std::string(resolved_answer) +
      "\n</reference>\n\n";
  out += response_block("A", item.response_a);
  out += "\n";
  out += response_block("B", item.response_b);
  out += "\nReply with exactly one fenced JSON block:\n"
         "```json\n{\"winner\": \"A\"}\n```\n"
         "where winner is \"A\", \"B\" or \"neither\".\n";
  return out;
}

Slot parse_pairwise_response(std::string_view raw) {
  const json root = parse_block(raw);
  const auto it = root.find("winner");
  if (it == root.end()) throw ParseError("missing field \"winner\"");
  if (!it->is_number_integer()) throw ParseError("\"winner\" must be 1 or 2");
  const auto w = it->get<std::int64_t>();
  if (w == 1) return Slot::First;
  if (w == 2) return Slot::Second;
  throw ValidationError("\"winner\" must be 1 or 2");
}

std::string parse_keyed_answer(std::string_view raw) {
  const json root = parse_block(raw);
  const auto it = root.find("answer");
  if (it == root.end() || !it->is_string()) throw ParseError("missing string field \"answer\"");
  return it->get<std::string>();
}

PairLabel parse_keyed_verdict(std::string_view raw) {
  const json root = parse_block(raw);
  const auto it = root.find("winner");
  if (it == root.end() || !it->is_string()) throw ParseError("missing string field \"winner\"");
  const std::string w = lower(it->get<std::string>());
  if (w == "a") return PairLabel::A;
  if (w == "b") return PairLabel::B;
  if (w == "neither" || w == "tie") return PairLabel::Tie;
  throw ValidationError("\"winner\" must be A, B or neither");
}

Slot GatewayPairwiseJudge::compare(const PairItem& item, PairOrder order) const {
  return call_with_correction(*gateway_, build_pairwise_prompt(item, order), kPairwiseTemplateVersion,
                              parse_pairwise_response);
}

KeyedVerdict GatewayPairwiseJudge::keyed(const PairItem& item) const {
  KeyedVerdict out;
  out.resolved_answer = call_with_correction(*gateway_, build_keyed_answer_prompt(item),
                                             kKeyedAnswerTemplateVersion, parse_keyed_answer);
  out.winner = call_with_correction(*gateway_, build_keyed_compare_prompt(item, out.resolved_answer),
                                    kKeyedCompareTemplateVersion, parse_keyed_verdict);
  return out;
}

// Synthetic judge ------------------------------------------------------------

MockPairwiseJudge::MockPairwiseJudge(MockPairSettings settings) : settings_(settings) {
  for (double p : {settings.accuracy, settings.position_bias, settings.keyed_accuracy, settings.keyed_abstain}) {
    if (!(p >= 0.0 && p <= 1.0)) throw Error("mock pair judge: probabilities must lie in [0,1]");
  }
  if (settings.keyed_accuracy + settings.keyed_abstain > 1.0) {
    throw Error("mock pair judge: keyed_accuracy + keyed_abstain exceeds 1");
  }
}

Slot MockPairwiseJudge::compare(const PairItem& item, PairOrder order) const {
  if (!item.gold) throw Error("mock pair judge needs a gold label");
  const bool ab = order == PairOrder::AB;
  const std::string& first = ab ? item.response_a : item.response_b;
  const std::string& second = ab ? item.response_b : item.response_a;
  Rng rng(mix_seed(mix_seed(settings_.seed, hash_string(first)), hash_string(second)));
  if (rng.bernoulli(settings_.position_bias)) return Slot::First;
  const bool right = rng.bernoulli(settings_.accuracy);
  const bool gold_first = (*item.gold == PairLabel::A) == ab;
  return (right == gold_first) ? Slot::First : Slot::Second;
}

KeyedVerdict MockPairwiseJudge::keyed(const PairItem& item) const {
  if (!item.gold) throw Error("mock pair judge needs a gold label");
  // XOR keeps the draw independent of which side each text sits on.
  Rng rng(mix_seed(settings_.seed ^ 0x6b6579ULL, hash_string(item.response_a) ^ hash_string(item.response_b)));
  const double u = rng.uniform();
  KeyedVerdict out;
  if (u < settings_.keyed_abstain) {
    out.winner = PairLabel::Tie;
    out.resolved_answer = "mock: unresolved";
  } else if (u < settings_.keyed_abstain + settings_.keyed_accuracy) {
    out.winner = *item.gold;
    out.resolved_answer = "mock: matches gold";
  } else {
    out.winner = flip(*item.gold);
    out.resolved_answer = "mock: matches the other response";
  }
  return out;
}

}  // namespace pcf::apoc
