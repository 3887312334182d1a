#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

namespace serrematch {

struct CacheKey {
  std::string family;
  long long d = 0;
  long long p = 0;
  std::string kind;  // "count" | "newform"
  std::string version = "v1";

  std::string identity() const;
};

// One JSON document per key under a two-level fan-out. Writes go through a
// temp file and an atomic rename; corrupt, checksum-mismatched, or
// version-mismatched entries read as misses (with a warning), never as data.
class JsonCache {
 public:
  explicit JsonCache(std::filesystem::path root);

  const std::filesystem::path& root() const { return root_; }

  std::optional<nlohmann::json> get(const CacheKey& key) const;
  void put(const CacheKey& key, const nlohmann::json& payload) const;

  std::filesystem::path path_for(const CacheKey& key) const;

 private:
  std::filesystem::path root_;
};

std::uint64_t fnv1a64(const std::string& data);

}  // namespace serrematch
