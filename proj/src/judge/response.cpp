#include "pcf/judge/response.hpp"

#include <algorithm>
#include <cctype>

#include <json.hpp>

#include "pcf/errors.hpp"

namespace pcf::judge {
namespace {

using nlohmann::json;

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Cuts at most `limit` bytes without splitting a UTF-8 sequence.
std::string truncate_utf8(const std::string& text, std::size_t limit) {
  std::size_t cut = limit;
  while (cut > 0 && (static_cast<unsigned char>(text[cut]) & 0xC0) == 0x80) --cut;
  return text.substr(0, cut);
}

const json& require(const json& obj, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(std::string("missing field \"") + key + "\"");
  return *it;
}

bool require_bool(const json& obj, const char* key) {
  const json& v = require(obj, key);
  if (!v.is_boolean()) throw ParseError(std::string("field \"") + key + "\" must be a boolean");
  return v.get<bool>();
}

// 1-based position label (already type-checked) -> 0-based index.
std::size_t position_index(const json& v, std::size_t n, const char* error) {
  if (v.is_number_unsigned()) {
    const auto label = v.get<std::uint64_t>();
    if (label >= 1 && label <= n) return static_cast<std::size_t>(label - 1);
  }
  throw ValidationError(error);
}

ListwiseJudgeResponse parse_object(const json& root, std::size_t n, std::size_t rationale_limit) {
  if (!root.is_object()) throw ParseError("structured block is not a JSON object");
  const json& records = require(root, "candidates");
  const json& ranking = require(root, "ranking");
  if (!records.is_array()) throw ParseError("\"candidates\" must be an array");
  if (!ranking.is_array()) throw ParseError("\"ranking\" must be an array");

  // Type-check every record before any semantic checks, so a structurally
  // broken reply is always reported as such.
  for (const json& rec : records) {
    if (!rec.is_object()) throw ParseError("candidate record is not an object");
    if (!require(rec, "position").is_number_integer()) throw ParseError("position must be an integer");
    if (!require(rec, "score").is_number()) throw ParseError("score must be a number");
    if (!require(rec, "rationale").is_string()) throw ParseError("rationale must be a string");
    require_bool(rec, "major_error");
    require_bool(rec, "hallucinated_specificity");
    require_bool(rec, "calibrated_uncertainty");
  }
  for (const json& v : ranking) {
    if (!v.is_number_integer()) throw ParseError("ranking entries must be integers");
  }

  if (records.size() != n) {
    throw ValidationError("expected " + std::to_string(n) + " candidate records, got " +
                          std::to_string(records.size()));
  }

  ListwiseJudgeResponse out;
  out.records.resize(n);
  std::vector<bool> seen(n, false);
  for (const json& rec : records) {
    const std::size_t pos = position_index(rec.at("position"), n, "position out of range");
    if (seen[pos]) throw ValidationError("duplicate position " + std::to_string(pos + 1));
    seen[pos] = true;

    PresentedRecord& r = out.records[pos];
    r.score = rec.at("score").get<double>();
    if (!(r.score >= 0.0 && r.score <= 100.0)) throw ValidationError("score out of range");
    r.rationale = rec.at("rationale").get<std::string>();
    if (r.rationale.size() > rationale_limit) {
      r.rationale = truncate_utf8(r.rationale, rationale_limit);
      r.rationale_truncated = true;
    }
    r.major_error = rec.at("major_error").get<bool>();
    r.halluc_specificity = rec.at("hallucinated_specificity").get<bool>();
    r.calibrated_uncertainty = rec.at("calibrated_uncertainty").get<bool>();
  }

  if (ranking.size() != n) throw ValidationError("invalid ranking");
  std::vector<bool> ranked(n, false);
  for (const json& v : ranking) {
    const std::size_t pos = position_index(v, n, "invalid ranking");
    if (ranked[pos]) throw ValidationError("invalid ranking");
    ranked[pos] = true;
    out.ranking.push_back(pos);
  }
  return out;
}

}  // namespace

std::string extract_structured_block(std::string_view raw) {
  constexpr std::string_view fence = "```";
  std::vector<std::string_view> blocks;
  std::size_t cursor = 0;
  while (true) {
    const std::size_t open = raw.find(fence, cursor);
    if (open == std::string_view::npos) break;
    // The info string ("json") runs to the end of the opening line.
    const std::size_t line_end = raw.find('\n', open + fence.size());
    if (line_end == std::string_view::npos) throw ParseError("unterminated code fence");
    const std::size_t close = raw.find(fence, line_end + 1);
    if (close == std::string_view::npos) throw ParseError("unterminated code fence");
    blocks.push_back(raw.substr(line_end + 1, close - line_end - 1));
    cursor = close + fence.size();
  }
  if (blocks.size() > 1) throw ParseError("expected a single structured block, found " +
                                          std::to_string(blocks.size()));
  if (blocks.size() == 1) return std::string(trim(blocks.front()));

  const std::string_view bare = trim(raw);
  if (bare.empty() || bare.front() != '{') throw ParseError("no structured block in reply");
  return std::string(bare);
}

ListwiseJudgeResponse parse_listwise_response(std::string_view raw, std::size_t n,
                                              std::size_t rationale_limit) {
  if (n < 2) throw Error("listwise requires ≥2 candidates");
  const std::string block = extract_structured_block(raw);
  try {
    const json root = json::parse(block, nullptr, /*allow_exceptions=*/false);
    if (root.is_discarded()) throw ParseError("structured block is not valid JSON");
    return parse_object(root, n, rationale_limit);
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed reply: ") + e.what());
  }
}

std::string render_listwise_response(const ListwiseJudgeResponse& response) {
  json records = json::array();
  for (std::size_t p = 0; p < response.records.size(); ++p) {
    const auto& r = response.records[p];
    records.push_back({{"position", p + 1},
                       {"score", r.score},
                       {"rationale", r.rationale},
                       {"major_error", r.major_error},
                       {"hallucinated_specificity", r.halluc_specificity},
                       {"calibrated_uncertainty", r.calibrated_uncertainty}});
  }
  json ranking = json::array();
  for (std::size_t pos : response.ranking) ranking.push_back(pos + 1);
  const json root = {{"candidates", records}, {"ranking", ranking}};
  return "```json\n" + root.dump(2) + "\n```\n";
}

RunVerdict to_run_verdict(std::size_t run_index, const Permutation& order,
                          const ListwiseJudgeResponse& response) {
  const std::size_t n = order.size();
  if (response.records.size() != n || response.ranking.size() != n) {
    throw ValidationError("response does not match permutation size");
  }
  std::vector<std::size_t> rank_at_position(n, 0);
  for (std::size_t place = 0; place < n; ++place) rank_at_position.at(response.ranking[place]) = place + 1;

  std::vector<CandidateVerdict> presented(n);
  for (std::size_t p = 0; p < n; ++p) {
    const auto& r = response.records[p];
    presented[p] = CandidateVerdict{r.score,
                                    rank_at_position[p],
                                    r.major_error,
                                    r.halluc_specificity,
                                    r.calibrated_uncertainty,
                                    r.rationale,
                                    r.rationale_truncated};
  }
  return make_run_verdict(run_index, order, remap(order, presented));
}

}  // namespace pcf::judge
