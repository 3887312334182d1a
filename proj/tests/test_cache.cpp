#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "serrematch/cache.hpp"

using namespace serrematch;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("serrematch-test-" + std::to_string(::getpid()) + "-" +
                                        std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("cache roundtrip") {
  TempDir tmp;
  JsonCache cache(tmp.path);
  CacheKey key{"schoen", 1, 7, "count", "v1"};
  nlohmann::json payload = {{"family", "schoen"}, {"d", 1}, {"p", 7}, {"count", 400}, {"version", "v1"}};
  cache.put(key, payload);
  auto hit = cache.get(key);
  REQUIRE(hit.has_value());
  CHECK((*hit)["count"] == 400);
  CHECK(*hit == payload);
}

TEST_CASE("absent key is a miss") {
  TempDir tmp;
  JsonCache cache(tmp.path);
  CHECK_FALSE(cache.get({"schoen", 1, 997, "count", "v1"}).has_value());
}

TEST_CASE("version mismatch reads as a miss") {
  TempDir tmp;
  JsonCache cache(tmp.path);
  CacheKey v0{"schoen", 1, 7, "count", "v0"};
  cache.put(v0, {{"count", 123}});
  CacheKey v1{"schoen", 1, 7, "count", "v1"};
  CHECK(cache.path_for(v0) == cache.path_for(v1));  // same file, gated by version
  CHECK_FALSE(cache.get(v1).has_value());
  CHECK(cache.get(v0).has_value());
}

TEST_CASE("checksum corruption reads as a miss, never as data") {
  TempDir tmp;
  JsonCache cache(tmp.path);
  CacheKey key{"schoen", 2, 11, "count", "v1"};
  cache.put(key, {{"count", 1234}});
  auto path = cache.path_for(key);
  nlohmann::json doc;
  {
    std::ifstream in(path);
    in >> doc;
  }
  doc["payload"]["count"] = 9999;  // tamper without fixing the checksum
  {
    std::ofstream out(path);
    out << doc.dump(2);
  }
  CHECK_FALSE(cache.get(key).has_value());
}

TEST_CASE("unparseable entries read as a miss") {
  TempDir tmp;
  JsonCache cache(tmp.path);
  CacheKey key{"schoen", 3, 13, "count", "v1"};
  cache.put(key, {{"count", 5}});
  {
    std::ofstream out(cache.path_for(key));
    out << "{ not json";
  }
  CHECK_FALSE(cache.get(key).has_value());
}

TEST_CASE("writes are atomic: no temp files remain") {
  TempDir tmp;
  JsonCache cache(tmp.path);
  for (int i = 0; i < 20; ++i) {
    cache.put({"schoen", i, 7, "count", "v1"}, {{"count", i}});
  }
  for (const auto& entry : fs::recursive_directory_iterator(tmp.path)) {
    if (entry.is_regular_file()) {
      CHECK(entry.path().extension() == ".json");
    }
  }
}

TEST_CASE("overwrite replaces the payload") {
  TempDir tmp;
  JsonCache cache(tmp.path);
  CacheKey key{"gamma0", 25, 4, "newform", "v1"};
  cache.put(key, {{"coeff_bound", 10}});
  cache.put(key, {{"coeff_bound", 50}});
  auto hit = cache.get(key);
  REQUIRE(hit.has_value());
  CHECK((*hit)["coeff_bound"] == 50);
}
