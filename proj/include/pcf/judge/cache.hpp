#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

namespace pcf::judge {

struct CacheEntry {
  std::string body;
  std::string model;
  std::string template_version;
  std::string timestamp;
};

/// SHA-256 (hex) over model id, template version and prompt text.
std::string cache_key(std::string_view model, std::string_view template_version,
                      std::string_view prompt);

/// Content-addressed on-disk store, one file per key. Writes go to a temp
/// file and are renamed into place, so concurrent readers only ever see
/// complete entries.
class ResponseCache {
 public:
  explicit ResponseCache(std::filesystem::path directory);

  std::optional<CacheEntry> get(const std::string& key) const;
  void put(const std::string& key, const CacheEntry& entry) const;
  bool contains(const std::string& key) const;

  const std::filesystem::path& directory() const { return directory_; }

 private:
  std::filesystem::path path_for(const std::string& key) const;

  std::filesystem::path directory_;
};

}  // namespace pcf::judge
