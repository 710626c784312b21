#include "pcf/judge/cache.hpp"

#include <openssl/evp.h>

#include <array>
#include <atomic>
#include <fstream>
#include <memory>
#include <sstream>
#include <thread>

#include "pcf/errors.hpp"

namespace pcf::judge {
namespace {

constexpr std::string_view kMagic = "pcf-cache/1";

std::string sha256_hex(std::string_view data) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int length = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), data.data(), data.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest.data(), &length) != 1) {
    throw Error("sha256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  hex.reserve(2 * length);
  for (unsigned int i = 0; i < length; ++i) {
    hex += kHex[digest[i] >> 4];
    hex += kHex[digest[i] & 0xF];
  }
  return hex;
}

// Header values are single-line by construction.
std::string one_line(std::string_view value) {
  std::string out(value);
  for (char& c : out) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  return out;
}

}  // namespace

std::string cache_key(std::string_view model, std::string_view template_version,
                      std::string_view prompt) {
  // Length-prefix each field so no two field tuples share a preimage.
  std::string material;
  for (std::string_view field : {model, template_version, prompt}) {
    material += std::to_string(field.size());
    material += ':';
    material += field;
  }
  return sha256_hex(material);
}

ResponseCache::ResponseCache(std::filesystem::path directory) : directory_(std::move(directory)) {
  std::error_code ec;
  std::filesystem::create_directories(directory_, ec);
  if (ec) throw ConfigError("cannot create cache directory " + directory_.string() + ": " + ec.message());
}

std::filesystem::path ResponseCache::path_for(const std::string& key) const {
  if (key.size() < 3 || key.find_first_not_of("0123456789abcdef") != std::string::npos) {
    throw Error("cache key must be lowercase hex");
  }
  return directory_ / key.substr(0, 2) / key;
}

bool ResponseCache::contains(const std::string& key) const {
  return std::filesystem::exists(path_for(key));
}

std::optional<CacheEntry> ResponseCache::get(const std::string& key) const {
  std::ifstream in(path_for(key), std::ios::binary);
  if (!in) return std::nullopt;

  CacheEntry entry;
  std::string line;
  if (!std::getline(in, line) || line != kMagic) throw Error("corrupt cache entry " + key);
  std::size_t bytes = 0;
  bool have_bytes = false;
  while (std::getline(in, line) && !line.empty()) {
    const auto colon = line.find(": ");
    if (colon == std::string::npos) throw Error("corrupt cache entry " + key);
    const std::string name = line.substr(0, colon);
    const std::string value = line.substr(colon + 2);
    if (name == "model") entry.model = value;
    else if (name == "template") entry.template_version = value;
    else if (name == "timestamp") entry.timestamp = value;
    else if (name == "bytes") {
      bytes = std::stoull(value);
      have_bytes = true;
    }
  }
  if (!have_bytes) throw Error("corrupt cache entry " + key);
  entry.body.resize(bytes);
  in.read(entry.body.data(), static_cast<std::streamsize>(bytes));
  if (static_cast<std::size_t>(in.gcount()) != bytes) throw Error("truncated cache entry " + key);
  return entry;
}

void ResponseCache::put(const std::string& key, const CacheEntry& entry) const {
  static std::atomic<std::uint64_t> counter{0};
  const auto target = path_for(key);
  std::filesystem::create_directories(target.parent_path());

  std::ostringstream tmp_name;
  tmp_name << target.filename().string() << ".tmp." << std::hash<std::thread::id>{}(std::this_thread::get_id())
           << '.' << counter++;
  const auto tmp = target.parent_path() / tmp_name.str();
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write cache entry " + tmp.string());
    out << kMagic << '\n'
        << "model: " << one_line(entry.model) << '\n'
        << "template: " << one_line(entry.template_version) << '\n'
        << "timestamp: " << one_line(entry.timestamp) << '\n'
        << "bytes: " << entry.body.size() << "\n\n";
    out.write(entry.body.data(), static_cast<std::streamsize>(entry.body.size()));
    if (!out) throw Error("cannot write cache entry " + tmp.string());
  }
  std::filesystem::rename(tmp, target);
}

}  // namespace pcf::judge
