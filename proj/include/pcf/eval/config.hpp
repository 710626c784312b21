#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "pcf/apoc.hpp"
#include "pcf/judge/backend.hpp"
#include "pcf/judge/mock.hpp"
#include "pcf/permutation.hpp"

namespace pcf::eval {

struct BackendSpec {
  enum class Kind { Http, Replay, Mock };

  std::string name;
  Kind kind = Kind::Mock;
  judge::JudgeBackendConfig http;  // Replay only uses http.model (cache key)
  judge::MockJudgeSettings listwise_mock;
  apoc::MockPairSettings pair_mock;
};

struct HarnessConfig {
  std::map<std::string, BackendSpec> backends;
  std::string default_backend = "mock";
  std::size_t k = 7;
  double tolerance = kDefaultTieTolerance;
  std::uint64_t seed = kDefaultScheduleSeed;
  std::size_t parallelism = 4;
  std::filesystem::path cache_dir = ".pcf-cache";
  std::size_t rationale_limit = judge::kDefaultRationaleLimit;
  std::vector<std::string> estimation_patterns;  // empty: built-in list

  const BackendSpec& backend(const std::string& name) const;
};

/// Built-in defaults with a single "mock" backend.
HarnessConfig default_config();

/// JSON config overlaid on default_config(). Throws ConfigError.
///
///   {"k": 7, "tolerance": 0.5, "seed": 20250417, "parallelism": 4,
///    "cache_dir": ".pcf-cache", "default_backend": "openai",
///    "estimation_patterns": ["ballpark", ...],
///    "backends": {
///      "openai": {"type": "http", "endpoint": "...", "model": "...",
///                 "auth_env": "OPENAI_API_KEY", ...},
///      "replay": {"type": "replay", "model": "..."},
///      "mock":   {"type": "mock", "position_bias": 0.4, "score_noise": 5}}}
HarnessConfig load_config(const std::filesystem::path& path);

std::unique_ptr<judge::ListwiseJudge> make_listwise_judge(const HarnessConfig& config,
                                                          const BackendSpec& backend);
std::unique_ptr<apoc::PairwiseJudge> make_pairwise_judge(const HarnessConfig& config,
                                                         const BackendSpec& backend);

}  // namespace pcf::eval
