#include "pcf/judge/gateway.hpp"

#include <ctime>

#include "pcf/judge/prompt.hpp"

namespace pcf::judge {
namespace {

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

JudgeGateway::JudgeGateway(std::string model, std::shared_ptr<TextBackend> backend,
                           std::optional<ResponseCache> cache)
    : model_(std::move(model)), backend_(std::move(backend)), cache_(std::move(cache)) {
  if (!backend_) throw ConfigError("judge gateway needs a backend");
}

std::string JudgeGateway::call_judge(const std::string& prompt, const std::string& key,
                                     std::string_view template_version) {
  if (cache_) {
    if (auto hit = cache_->get(key)) {
      ++cache_hits_;
      return std::move(hit->body);
    }
  }
  ++backend_calls_;
  std::string reply = backend_->complete(prompt);
  if (cache_) {
    cache_->put(key, CacheEntry{reply, model_, std::string(template_version), utc_timestamp()});
  }
  return reply;
}

std::string JudgeGateway::call_judge(const std::string& prompt, std::string_view template_version) {
  return call_judge(prompt, cache_key(model_, template_version, prompt), template_version);
}

ListwiseJudgeResponse GatewayListwiseJudge::judge(const EvalItem& item, const Permutation& order) const {
  const std::string prompt = build_listwise_prompt(item, pcf::apply(order, item.candidates));
  const std::string first = gateway_->call_judge(prompt, kListwiseTemplateVersion);
  try {
    return parse_listwise_response(first, order.size(), rationale_limit_);
  } catch (const ParseError& e) {
    const std::string retry = build_corrective_prompt(prompt, e.what());
    return parse_listwise_response(gateway_->call_judge(retry, kListwiseTemplateVersion), order.size(),
                                   rationale_limit_);
  } catch (const ValidationError& e) {
    const std::string retry = build_corrective_prompt(prompt, e.what());
    return parse_listwise_response(gateway_->call_judge(retry, kListwiseTemplateVersion), order.size(),
                                   rationale_limit_);
  }
}

}  // namespace pcf::judge
