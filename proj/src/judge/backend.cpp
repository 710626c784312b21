#include "pcf/judge/backend.hpp"

#include <httplib.h>

#include <cmath>
#include <cstdlib>
#include <regex>
#include <thread>

#include "pcf/errors.hpp"

namespace pcf::judge {
namespace {

using nlohmann::json;

void replace_all(std::string& text, std::string_view from, std::string_view to) {
  std::size_t pos = 0;
  while ((pos = text.find(from, pos)) != std::string::npos) {
    text.replace(pos, from.size(), to);
    pos += to.size();
  }
}

json substitute(const json& node, const std::string& prompt, const std::string& model) {
  if (node.is_string()) {
    std::string s = node.get<std::string>();
    replace_all(s, "{{model}}", model);
    replace_all(s, "{{prompt}}", prompt);
    return s;
  }
  if (node.is_array() || node.is_object()) {
    json out = node;
    for (auto it = out.begin(); it != out.end(); ++it) *it = substitute(*it, prompt, model);
    return out;
  }
  return node;
}

bool transient_status(int status) { return status == 408 || status == 429 || status >= 500; }

}  // namespace

void JudgeBackendConfig::validate() const {
  if (!(timeout_seconds > 0.0)) throw ConfigError("timeout must be positive");
  if (max_retries < 0) throw ConfigError("max_retries must be >= 0");
  if (backoff_initial_seconds < 0.0) throw ConfigError("backoff must be >= 0");
  static const std::regex url(R"(^https?://[^/\s]+(/\S*)?$)");
  if (!std::regex_match(endpoint, url)) throw ConfigError("invalid endpoint URL: " + endpoint);
  if (model.empty()) throw ConfigError("model identifier is required");
  if (!decoding.is_object()) throw ConfigError("decoding settings must be a JSON object");
}

JudgeBackendConfig backend_config_from_json(const json& j) {
  JudgeBackendConfig c;
  try {
    c.endpoint = j.at("endpoint").get<std::string>();
    c.model = j.at("model").get<std::string>();
    c.auth_env = j.value("auth_env", c.auth_env);
    c.auth_header = j.value("auth_header", c.auth_header);
    c.auth_prefix = j.value("auth_prefix", c.auth_prefix);
    c.headers = j.value("headers", c.headers);
    c.timeout_seconds = j.value("timeout_seconds", c.timeout_seconds);
    c.max_retries = j.value("max_retries", c.max_retries);
    c.backoff_initial_seconds = j.value("backoff_initial_seconds", c.backoff_initial_seconds);
    if (j.contains("decoding")) c.decoding = j.at("decoding");
    if (j.contains("request_template")) c.request_template = j.at("request_template");
    c.response_pointer = j.value("response_pointer", c.response_pointer);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("backend config: ") + e.what());
  }
  c.validate();
  return c;
}

HttpBackend::HttpBackend(JudgeBackendConfig config) : config_(std::move(config)) {
  config_.validate();
  static const std::regex url(R"(^(https?://[^/]+)(/.*)?$)");
  std::smatch m;
  std::regex_match(config_.endpoint, m, url);
  scheme_host_port_ = m[1].str();
  path_ = m[2].matched ? m[2].str() : "/";
}

json HttpBackend::render_request(const std::string& prompt) const {
  json body = substitute(config_.request_template, prompt, config_.model);
  if (!body.is_object()) throw ConfigError("request template must be a JSON object");
  for (auto it = config_.decoding.begin(); it != config_.decoding.end(); ++it) body[it.key()] = it.value();
  return body;
}

std::string HttpBackend::complete(const std::string& prompt) {
  httplib::Headers headers;
  if (!config_.auth_env.empty()) {
    const char* token = std::getenv(config_.auth_env.c_str());
    if (token == nullptr || *token == '\0') {
      throw ConfigError("auth token variable " + config_.auth_env + " is not set");
    }
    headers.emplace(config_.auth_header, config_.auth_prefix + token);
  }
  for (const auto& [name, value] : config_.headers) headers.emplace(name, value);
  const std::string body = render_request(prompt).dump();

  httplib::Client client(scheme_host_port_);
  const auto secs = static_cast<time_t>(config_.timeout_seconds);
  const auto usecs = static_cast<time_t>((config_.timeout_seconds - static_cast<double>(secs)) * 1e6);
  client.set_connection_timeout(secs, usecs);
  client.set_read_timeout(secs, usecs);
  client.set_write_timeout(secs, usecs);

  std::string last_error;
  int attempt = 0;
  for (; attempt <= config_.max_retries; ++attempt) {
    if (attempt > 0) {
      const double delay = config_.backoff_initial_seconds * std::pow(2.0, attempt - 1);
      std::this_thread::sleep_for(std::chrono::duration<double>(delay));
    }
    ++attempts_;
    auto res = client.Post(path_, headers, body, "application/json");
    if (!res) {
      last_error = "transport error: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status == 200) {
      const json reply = json::parse(res->body, nullptr, false);
      if (reply.is_discarded()) throw BackendError("backend reply is not JSON");
      try {
        const json& text = reply.at(json::json_pointer(config_.response_pointer));
        if (!text.is_string()) throw BackendError("reply text at " + config_.response_pointer + " is not a string");
        return text.get<std::string>();
      } catch (const json::exception& e) {
        throw BackendError(std::string("reply missing ") + config_.response_pointer + ": " + e.what());
      }
    }
    last_error = "HTTP " + std::to_string(res->status);
    if (!transient_status(res->status)) {
      ++attempt;
      break;
    }
  }
  throw BackendError("judge call failed after " + std::to_string(attempt) +
                     " attempt(s): " + last_error);
}

ScriptedBackend::Script ScriptedBackend::canned(std::string reply) {
  return [reply = std::move(reply)](const std::string&) { return reply; };
}

std::string OfflineBackend::complete(const std::string&) {
  throw BackendError("cache miss in replay mode");
}

}  // namespace pcf::judge
