#include "pcf/eval/config.hpp"

#include <fstream>

#include "pcf/errors.hpp"
#include "pcf/judge/gateway.hpp"

namespace pcf::eval {

using nlohmann::json;

namespace {

BackendSpec mock_backend(const std::string& name, const json& j) {
  BackendSpec spec;
  spec.name = name;
  spec.kind = BackendSpec::Kind::Mock;
  auto& lw = spec.listwise_mock;
  lw.position_bias = j.value("position_bias", lw.position_bias);
  lw.score_noise = j.value("score_noise", lw.score_noise);
  lw.bias_margin = j.value("bias_margin", lw.bias_margin);
  lw.gold_quality = j.value("gold_quality", lw.gold_quality);
  lw.other_quality = j.value("other_quality", lw.other_quality);
  lw.other_step = j.value("other_step", lw.other_step);
  lw.seed = j.value("seed", lw.seed);
  auto& pw = spec.pair_mock;
  pw.accuracy = j.value("pair_accuracy", pw.accuracy);
  pw.position_bias = j.value("pair_position_bias", pw.position_bias);
  pw.keyed_accuracy = j.value("keyed_accuracy", pw.keyed_accuracy);
  pw.keyed_abstain = j.value("keyed_abstain", pw.keyed_abstain);
  pw.seed = j.value("seed", pw.seed);
  return spec;
}

BackendSpec parse_backend(const std::string& name, const json& j) {
  if (!j.is_object()) throw ConfigError("backend " + name + " must be an object");
  const std::string type = j.value("type", "");
  if (type == "mock") return mock_backend(name, j);
  BackendSpec spec;
  spec.name = name;
  if (type == "http") {
    spec.kind = BackendSpec::Kind::Http;
    spec.http = judge::backend_config_from_json(j);
  } else if (type == "replay") {
    spec.kind = BackendSpec::Kind::Replay;
    spec.http.model = j.value("model", "");
    if (spec.http.model.empty()) throw ConfigError("replay backend " + name + " needs the model id it replays");
  } else {
    throw ConfigError("backend " + name + ": unknown type \"" + type + "\"");
  }
  return spec;
}

std::shared_ptr<judge::JudgeGateway> make_gateway(const HarnessConfig& config, const BackendSpec& backend) {
  std::shared_ptr<judge::TextBackend> text;
  if (backend.kind == BackendSpec::Kind::Http) {
    text = std::make_shared<judge::HttpBackend>(backend.http);
  } else {
    text = std::make_shared<judge::OfflineBackend>();
  }
  return std::make_shared<judge::JudgeGateway>(backend.http.model, std::move(text),
                                               judge::ResponseCache(config.cache_dir));
}

}  // namespace

const BackendSpec& HarnessConfig::backend(const std::string& name) const {
  const auto it = backends.find(name.empty() ? default_backend : name);
  if (it == backends.end()) throw ConfigError("unknown backend \"" + (name.empty() ? default_backend : name) + "\"");
  return it->second;
}

HarnessConfig default_config() {
  HarnessConfig config;
  config.backends.emplace("mock", mock_backend("mock", json::object()));
  return config;
}

HarnessConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  const json j = json::parse(in, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw ConfigError("config " + path.string() + " is not a JSON object");

  HarnessConfig config = default_config();
  try {
    config.k = j.value("k", config.k);
    config.tolerance = j.value("tolerance", config.tolerance);
    config.seed = j.value("seed", config.seed);
    config.parallelism = j.value("parallelism", config.parallelism);
    config.cache_dir = j.value("cache_dir", config.cache_dir.string());
    config.rationale_limit = j.value("rationale_limit", config.rationale_limit);
    config.default_backend = j.value("default_backend", config.default_backend);
    config.estimation_patterns = j.value("estimation_patterns", config.estimation_patterns);
    if (j.contains("backends")) {
      for (const auto& [name, spec] : j.at("backends").items()) {
        config.backends.insert_or_assign(name, parse_backend(name, spec));
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }
  if (config.k < 1) throw ConfigError("k must be >= 1");
  if (!(config.tolerance >= 0.0)) throw ConfigError("tolerance must be >= 0");
  if (config.parallelism < 1) throw ConfigError("parallelism must be >= 1");
  config.backend(config.default_backend);
  return config;
}

std::unique_ptr<judge::ListwiseJudge> make_listwise_judge(const HarnessConfig& config,
                                                          const BackendSpec& backend) {
  if (backend.kind == BackendSpec::Kind::Mock) {
    return std::make_unique<judge::MockListwiseJudge>(backend.listwise_mock);
  }
  return std::make_unique<judge::GatewayListwiseJudge>(make_gateway(config, backend), config.rationale_limit);
}

std::unique_ptr<apoc::PairwiseJudge> make_pairwise_judge(const HarnessConfig& config,
                                                         const BackendSpec& backend) {
  if (backend.kind == BackendSpec::Kind::Mock) {
    return std::make_unique<apoc::MockPairwiseJudge>(backend.pair_mock);
  }
  return std::make_unique<apoc::GatewayPairwiseJudge>(make_gateway(config, backend));
}

}  // namespace pcf::eval
