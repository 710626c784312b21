#include "pcf/permutation.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "pcf/rng.hpp"

namespace pcf {

Permutation::Permutation(std::vector<std::size_t> mapping) : mapping_(std::move(mapping)) {
  std::vector<bool> seen(mapping_.size(), false);
  for (std::size_t original : mapping_) {
    if (original >= mapping_.size() || seen[original]) {
      throw Error("permutation is not a bijection: " + to_string());
    }
    seen[original] = true;
  }
}

Permutation Permutation::identity(std::size_t n) {
  std::vector<std::size_t> mapping(n);
  std::iota(mapping.begin(), mapping.end(), std::size_t{0});
  return Permutation(std::move(mapping));
}

std::size_t Permutation::position_of(std::size_t original) const {
  const auto it = std::find(mapping_.begin(), mapping_.end(), original);
  if (it == mapping_.end()) throw Error("position_of: index out of range");
  return static_cast<std::size_t>(it - mapping_.begin());
}

Permutation Permutation::inverse() const {
  std::vector<std::size_t> inv(mapping_.size());
  for (std::size_t p = 0; p < mapping_.size(); ++p) inv[mapping_[p]] = p;
  return Permutation(std::move(inv));
}

bool Permutation::is_identity() const {
  for (std::size_t p = 0; p < mapping_.size(); ++p) {
    if (mapping_[p] != p) return false;
  }
  return true;
}

std::string Permutation::to_string() const {
  std::string out = "[";
  for (std::size_t p = 0; p < mapping_.size(); ++p) {
    if (p) out += ',';
    out += std::to_string(mapping_[p]);
  }
  return out + "]";
}

namespace {

// n! saturated at `cap`.
std::size_t factorial_capped(std::size_t n, std::size_t cap) {
  std::size_t f = 1;
  for (std::size_t i = 2; i <= n; ++i) {
    if (f > cap / i) return cap;
    f *= i;
  }
  return f;
}

}  // namespace

PermutationSchedule build_schedule(std::size_t n, std::size_t k, std::uint64_t seed) {
  if (n < 2) throw Error("listwise requires ≥2 candidates");
  if (k < 1) throw Error("schedule needs k >= 1");
  if (k > factorial_capped(n, k)) {
    // factorial_capped returns exactly n! whenever n! < k.
    throw Error("not enough distinct permutations");
  }

  PermutationSchedule schedule{n, k, seed, {}};
  schedule.permutations.reserve(k);
  schedule.permutations.push_back(Permutation::identity(n));
  std::set<std::vector<std::size_t>> seen{{schedule.permutations.front().mapping().begin(),
                                           schedule.permutations.front().mapping().end()}};

  Rng rng(mix_seed(seed, n));
  while (schedule.permutations.size() < k) {
    std::vector<std::size_t> mapping(n);
    std::iota(mapping.begin(), mapping.end(), std::size_t{0});
    for (std::size_t i = n - 1; i > 0; --i) {
      std::swap(mapping[i], mapping[rng.below(i + 1)]);
    }
    if (seen.insert(mapping).second) schedule.permutations.emplace_back(std::move(mapping));
  }
  return schedule;
}

}  // namespace pcf
