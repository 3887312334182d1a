#include "serrematch/cache.hpp"

#include <unistd.h>

#include <atomic>
#include <fstream>
#include <iostream>
#include <sstream>

namespace serrematch {

std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

// The version is deliberately not part of the identity: a reader at a newer
// version must find the same file and treat the stale entry as a miss.
std::string CacheKey::identity() const {
  return family + "_d" + std::to_string(d) + "_p" + std::to_string(p) + "_" + kind;
}

JsonCache::JsonCache(std::filesystem::path root) : root_(std::move(root)) {}

std::filesystem::path JsonCache::path_for(const CacheKey& key) const {
  std::string id = key.identity();
  char fanout[3];
  std::snprintf(fanout, sizeof(fanout), "%02x", static_cast<unsigned>(fnv1a64(id) & 0xFF));
  return root_ / key.kind / fanout / (id + ".json");
}

std::optional<nlohmann::json> JsonCache::get(const CacheKey& key) const {
  std::filesystem::path path = path_for(key);
  std::ifstream in(path);
  if (!in) return std::nullopt;
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception&) {
    std::cerr << "[cache] warning: unparseable entry treated as miss: " << path << "\n";
    return std::nullopt;
  }
  if (!doc.is_object() || !doc.contains("key") || !doc.contains("payload") || !doc.contains("checksum")) {
    std::cerr << "[cache] warning: malformed entry treated as miss: " << path << "\n";
    return std::nullopt;
  }
  if (doc["key"].value("version", "") != key.version) {
    std::cerr << "[cache] warning: version mismatch treated as miss: " << path << "\n";
    return std::nullopt;
  }
  std::ostringstream expect;
  expect << std::hex << fnv1a64(doc["payload"].dump());
  if (doc["checksum"].get<std::string>() != expect.str()) {
    std::cerr << "[cache] warning: checksum mismatch treated as miss: " << path << "\n";
    return std::nullopt;
  }
  return doc["payload"];
}

void JsonCache::put(const CacheKey& key, const nlohmann::json& payload) const {
  std::filesystem::path path = path_for(key);
  std::filesystem::create_directories(path.parent_path());
  nlohmann::json doc;
  doc["key"] = {{"family", key.family}, {"d", key.d}, {"p", key.p}, {"kind", key.kind}, {"version", key.version}};
  doc["payload"] = payload;
  std::ostringstream sum;
  sum << std::hex << fnv1a64(payload.dump());
  doc["checksum"] = sum.str();

  static std::atomic<unsigned> counter{0};
  std::filesystem::path tmp = path;
  tmp += ".tmp" + std::to_string(::getpid()) + "_" + std::to_string(counter.fetch_add(1));
  {
    std::ofstream out(tmp);
    out << doc.dump(2) << "\n";
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace serrematch
