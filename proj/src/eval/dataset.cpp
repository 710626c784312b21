#include "pcf/eval/dataset.hpp"

#include <algorithm>
#include <fstream>

#include "pcf/errors.hpp"
#include "pcf/rng.hpp"

namespace pcf::eval {
namespace {

using nlohmann::json;

template <class Item, class Parse>
Dataset<Item> load_jsonl(const std::filesystem::path& path, std::optional<std::size_t> slice_size,
                         Parse parse) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open dataset " + path.string());

  Dataset<Item> data;
  std::size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const json j = json::parse(line, nullptr, false);
    if (j.is_discarded()) throw Error(path.string() + ":" + std::to_string(line_no) + ": malformed JSON");
    try {
      data.items.push_back(parse(j));
    } catch (const std::exception& e) {
      throw Error(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }

  std::stable_sort(data.items.begin(), data.items.end(),
                   [](const Item& a, const Item& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < data.items.size(); ++i) {
    if (data.items[i].id == data.items[i - 1].id) throw Error("duplicate item id " + data.items[i].id);
  }
  if (slice_size) {
    if (*slice_size > data.items.size()) {
      data.warnings.push_back("slice size " + std::to_string(*slice_size) + " exceeds the " +
                              std::to_string(data.items.size()) + " records in " + path.string() +
                              "; using all records");
    } else {
      data.items.resize(*slice_size);
    }
  }
  return data;
}

std::string required_string(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end() || !it->is_string()) throw Error(std::string("missing string field \"") + key + "\"");
  return it->get<std::string>();
}

std::optional<std::string> optional_string(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) throw Error(std::string("field \"") + key + "\" must be a string");
  return it->get<std::string>();
}

}  // namespace

EvalItem listwise_item_from_json(const json& j) {
  if (!j.is_object()) throw Error("record is not an object");
  EvalItem item;
  item.id = required_string(j, "id");
  item.prompt = required_string(j, "prompt");
  const auto cands = j.find("candidates");
  if (cands == j.end() || !cands->is_array()) throw Error("missing array field \"candidates\"");
  for (const json& c : *cands) {
    if (!c.is_string() || c.get_ref<const std::string&>().empty()) {
      throw Error("candidates must be non-empty strings");
    }
    item.candidates.push_back(c.get<std::string>());
  }
  if (item.candidates.size() < 2) throw Error("listwise requires ≥2 candidates");
  if (const auto g = j.find("gold_index"); g != j.end() && !g->is_null()) {
    if (!g->is_number_unsigned() || g->get<std::uint64_t>() >= item.candidates.size()) {
      throw Error("gold_index out of range");
    }
    item.gold_index = g->get<std::size_t>();
  }
  item.source = optional_string(j, "source");
  return item;
}

json to_json(const EvalItem& item) {
  json j = {{"id", item.id}, {"prompt", item.prompt}, {"candidates", item.candidates}};
  if (item.gold_index) j["gold_index"] = *item.gold_index;
  if (item.source) j["source"] = *item.source;
  return j;
}

apoc::PairItem pair_item_from_json(const json& j) {
  if (!j.is_object()) throw Error("record is not an object");
  apoc::PairItem item;
  item.id = required_string(j, "id");
  item.question = required_string(j, "question");
  item.response_a = required_string(j, "response_a");
  item.response_b = required_string(j, "response_b");
  if (const auto label = optional_string(j, "label")) {
    if (*label == "A>B") item.gold = apoc::PairLabel::A;
    else if (*label == "B>A") item.gold = apoc::PairLabel::B;
    else throw Error("label must be \"A>B\" or \"B>A\"");
  }
  item.source = optional_string(j, "source").value_or("");
  item.validate();
  return item;
}

json to_json(const apoc::PairItem& item) {
  json j = {{"id", item.id},
            {"question", item.question},
            {"response_a", item.response_a},
            {"response_b", item.response_b}};
  if (item.gold) j["label"] = *item.gold == apoc::PairLabel::A ? "A>B" : "B>A";
  if (!item.source.empty()) j["source"] = item.source;
  return j;
}

Dataset<EvalItem> load_listwise_dataset(const std::filesystem::path& path,
                                        std::optional<std::size_t> slice_size) {
  return load_jsonl<EvalItem>(path, slice_size, listwise_item_from_json);
}

Dataset<apoc::PairItem> load_pair_dataset(const std::filesystem::path& path,
                                          std::optional<std::size_t> slice_size) {
  return load_jsonl<apoc::PairItem>(path, slice_size, pair_item_from_json);
}

std::vector<EvalItem> make_synthetic_listwise_items(std::size_t count, std::size_t n, std::uint64_t seed,
                                                    std::size_t sources) {
  if (n < 2) throw Error("listwise requires ≥2 candidates");
  Rng rng(seed);
  std::vector<EvalItem> items;
  items.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    char id[32];
    std::snprintf(id, sizeof id, "syn-%06zu", i);
    EvalItem item;
    item.id = id;
    item.prompt = "Synthetic factuality prompt #" + std::to_string(i);
    for (std::size_t c = 0; c < n; ++c) {
      item.candidates.push_back("Synthetic answer " + std::to_string(c) + " to prompt #" + std::to_string(i));
    }
    item.gold_index = static_cast<std::size_t>(rng.below(n));
    if (sources > 0) item.source = "bucket-" + std::to_string(i % sources);
    items.push_back(std::move(item));
  }
  return items;
}

}  // namespace pcf::eval
