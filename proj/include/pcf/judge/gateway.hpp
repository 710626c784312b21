#pragma once

#include <atomic>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "pcf/judge/backend.hpp"
#include "pcf/judge/cache.hpp"
#include "pcf/judge/response.hpp"
#include "pcf/types.hpp"

namespace pcf::judge {

/// Cache-first access to one judge model.
class JudgeGateway {
 public:
  JudgeGateway(std::string model, std::shared_ptr<TextBackend> backend,
               std::optional<ResponseCache> cache = std::nullopt);

  /// Returns the cached reply for `key` if there is one; otherwise asks the
  /// backend and stores the reply under `key`.
  std::string call_judge(const std::string& prompt, const std::string& key,
                         std::string_view template_version);

  /// Same, with key = cache_key(model, template_version, prompt).
  std::string call_judge(const std::string& prompt, std::string_view template_version);

  const std::string& model() const { return model_; }
  std::size_t backend_calls() const { return backend_calls_.load(); }
  std::size_t cache_hits() const { return cache_hits_.load(); }

 private:
  std::string model_;
  std::shared_ptr<TextBackend> backend_;
  std::optional<ResponseCache> cache_;
  std::atomic<std::size_t> backend_calls_{0};
  std::atomic<std::size_t> cache_hits_{0};
};

/// Something that can judge an item under one presentation order.
class ListwiseJudge {
 public:
  virtual ~ListwiseJudge() = default;
  virtual ListwiseJudgeResponse judge(const EvalItem& item, const Permutation& order) const = 0;
};

/// Prompt -> gateway -> strict parse. A reply that fails to parse or
/// validate gets one corrective re-prompt; a second failure propagates.
class GatewayListwiseJudge final : public ListwiseJudge {
 public:
  explicit GatewayListwiseJudge(std::shared_ptr<JudgeGateway> gateway,
                                std::size_t rationale_limit = kDefaultRationaleLimit)
      : gateway_(std::move(gateway)), rationale_limit_(rationale_limit) {}

  ListwiseJudgeResponse judge(const EvalItem& item, const Permutation& order) const override;

  JudgeGateway& gateway() const { return *gateway_; }

 private:
  std::shared_ptr<JudgeGateway> gateway_;
  std::size_t rationale_limit_;
};

}  // namespace pcf::judge
