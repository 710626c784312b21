#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace pcf {

/// Index of a candidate in the ORIGINAL (dataset) order. Never a presented
/// position.
struct CandidateId {
  std::size_t index = 0;

  friend constexpr auto operator<=>(CandidateId, CandidateId) = default;
  friend std::ostream& operator<<(std::ostream& os, CandidateId id) { return os << id.index; }
};

using CandidateSet = std::vector<CandidateId>;  // kept sorted, no duplicates

/// One listwise benchmark row.
struct EvalItem {
  std::string id;
  std::string prompt;
  std::vector<std::string> candidates;
  std::optional<std::size_t> gold_index;
  std::optional<std::string> source;

  std::size_t size() const { return candidates.size(); }
  friend bool operator==(const EvalItem&, const EvalItem&) = default;
};

}  // namespace pcf
