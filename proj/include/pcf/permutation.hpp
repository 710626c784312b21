#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pcf/errors.hpp"

namespace pcf {

/// A presentation order: mapping()[p] is the original index of the candidate
/// shown at position p.
class Permutation {
 public:
  Permutation() = default;
  /// Throws Error unless mapping is a bijection on {0..n-1}.
  explicit Permutation(std::vector<std::size_t> mapping);

  static Permutation identity(std::size_t n);

  std::size_t size() const { return mapping_.size(); }
  std::size_t original_at(std::size_t position) const { return mapping_.at(position); }
  std::size_t position_of(std::size_t original) const;
  std::span<const std::size_t> mapping() const { return mapping_; }

  Permutation inverse() const;
  bool is_identity() const;
  std::string to_string() const;

  friend auto operator<=>(const Permutation&, const Permutation&) = default;

 private:
  std::vector<std::size_t> mapping_;
};

/// The fixed set of orders reused across every item with the same n.
struct PermutationSchedule {
  std::size_t n = 0;
  std::size_t k = 0;
  std::uint64_t seed = 0;
  std::vector<Permutation> permutations;
};

inline constexpr std::uint64_t kDefaultScheduleSeed = 20250417;

/// Identity first, then k-1 distinct seeded shuffles.
PermutationSchedule build_schedule(std::size_t n, std::size_t k,
                                   std::uint64_t seed = kDefaultScheduleSeed);

/// Presented list: output[p] = candidates[mapping[p]].
template <class T>
std::vector<T> apply(const Permutation& perm, const std::vector<T>& candidates) {
  if (candidates.size() != perm.size()) {
    throw Error("apply: length mismatch (" + std::to_string(candidates.size()) + " vs " +
                std::to_string(perm.size()) + ")");
  }
  std::vector<T> out;
  out.reserve(candidates.size());
  for (std::size_t p = 0; p < perm.size(); ++p) out.push_back(candidates[perm.original_at(p)]);
  return out;
}

/// Back to original attribution: output[mapping[p]] = presented[p].
template <class T>
std::vector<T> remap(const Permutation& perm, const std::vector<T>& presented) {
  if (presented.size() != perm.size()) {
    throw Error("remap: length mismatch (" + std::to_string(presented.size()) + " vs " +
                std::to_string(perm.size()) + ")");
  }
  std::vector<T> out(presented.size());
  for (std::size_t p = 0; p < perm.size(); ++p) out[perm.original_at(p)] = presented[p];
  return out;
}

}  // namespace pcf
