#pragma once

#include <atomic>
#include <chrono>
#include <cstddef>
#include <functional>
#include <map>
#include <string>

#include <json.hpp>

namespace pcf::judge {

/// How to reach one chat-completion style HTTP service. Request and response
/// shapes are provider-specific and come from config: `request_template` is a
/// JSON body whose string values may contain {{prompt}} and {{model}};
/// `decoding` entries are merged into the body's top level; the reply text is
/// read at `response_pointer` (a JSON pointer).
struct JudgeBackendConfig {
  std::string endpoint;  // scheme://host[:port]/path
  std::string model;
  std::string auth_env;  // name of the env var holding the token
  std::string auth_header = "Authorization";
  std::string auth_prefix = "Bearer ";
  std::map<std::string, std::string> headers;
  double timeout_seconds = 120.0;
  int max_retries = 3;
  double backoff_initial_seconds = 1.0;
  nlohmann::json decoding = {{"temperature", 0}};
  nlohmann::json request_template = {
      {"model", "{{model}}"},
      {"messages", nlohmann::json::array({{{"role", "user"}, {"content", "{{prompt}}"}}})}};
  std::string response_pointer = "/choices/0/message/content";

  /// Throws ConfigError on timeout <= 0, retries < 0, or a bad endpoint.
  void validate() const;
};

JudgeBackendConfig backend_config_from_json(const nlohmann::json& j);

/// Anything that turns a prompt into raw reply text.
class TextBackend {
 public:
  virtual ~TextBackend() = default;
  virtual std::string complete(const std::string& prompt) = 0;
};

/// Live HTTP(S) backend with bounded retries and exponential backoff.
/// Retries cover connection failures, 408, 429 and 5xx; other statuses fail
/// at once.
class HttpBackend final : public TextBackend {
 public:
  explicit HttpBackend(JudgeBackendConfig config);

  std::string complete(const std::string& prompt) override;

  std::size_t attempts() const { return attempts_.load(); }
  const JudgeBackendConfig& config() const { return config_; }

  /// Request body for a prompt (exposed for tests).
  nlohmann::json render_request(const std::string& prompt) const;

 private:
  JudgeBackendConfig config_;
  std::string scheme_host_port_;
  std::string path_;
  std::atomic<std::size_t> attempts_{0};
};

/// In-process backend driven by a function; used for canned replies and
/// test doubles.
class ScriptedBackend final : public TextBackend {
 public:
  using Script = std::function<std::string(const std::string& prompt)>;

  explicit ScriptedBackend(Script script) : script_(std::move(script)) {}
  static Script canned(std::string reply);

  std::string complete(const std::string& prompt) override {
    ++calls_;
    return script_(prompt);
  }
  std::size_t calls() const { return calls_.load(); }

 private:
  Script script_;
  std::atomic<std::size_t> calls_{0};
};

/// Backend for replay-only runs: every cache miss is an error.
class OfflineBackend final : public TextBackend {
 public:
  std::string complete(const std::string& prompt) override;
};

}  // namespace pcf::judge
