#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pcf/apoc.hpp"
#include "pcf/types.hpp"

namespace pcf::eval {

template <class Item>
struct Dataset {
  std::vector<Item> items;
  std::vector<std::string> warnings;
};

/// JSONL, one item per line:
///   {"id", "prompt", "candidates": [..], "gold_index"?, "source"?}
/// Items are stably sorted by id and the first slice_size kept. Errors carry
/// the 1-based line number.
Dataset<EvalItem> load_listwise_dataset(const std::filesystem::path& path,
                                        std::optional<std::size_t> slice_size = std::nullopt);

/// JSONL, one pair per line:
///   {"id", "question", "response_a", "response_b", "label": "A>B"|"B>A"?, "source"?}
Dataset<apoc::PairItem> load_pair_dataset(const std::filesystem::path& path,
                                          std::optional<std::size_t> slice_size = std::nullopt);

EvalItem listwise_item_from_json(const nlohmann::json& j);
nlohmann::json to_json(const EvalItem& item);
apoc::PairItem pair_item_from_json(const nlohmann::json& j);
nlohmann::json to_json(const apoc::PairItem& item);

/// Items with n candidates and a random gold position; candidate texts are
/// unique placeholders. Deterministic in seed.
std::vector<EvalItem> make_synthetic_listwise_items(std::size_t count, std::size_t n, std::uint64_t seed,
                                                    std::size_t sources = 3);

}  // namespace pcf::eval
