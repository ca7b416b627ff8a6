#include "manifest.hpp"

#include "levythin/version.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <stdexcept>

namespace levythin::cli {

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace {

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

void write_manifest(const std::string& artifact, const std::string& command_line,
                    std::uint64_t seed, const nlohmann::json& config,
                    const nlohmann::json& extra) {
  char hash[20];
  std::snprintf(hash, sizeof hash, "%016llx",
                static_cast<unsigned long long>(fnv1a(config.dump())));
  nlohmann::json m;
  m["format"] = "levythin-manifest 1";
  m["artifact"] = artifact;
  m["command_line"] = command_line;
  m["seed"] = seed;
  m["config"] = config;
  m["config_hash"] = hash;
  m["version"] = levythin::version();
  m["timestamp"] = utc_timestamp();
  for (auto it = extra.begin(); it != extra.end(); ++it) m[it.key()] = it.value();
  std::ofstream out(artifact + ".manifest.json");
  if (!out) throw std::runtime_error("cannot write manifest for " + artifact);
  out << m.dump(2) << '\n';
}

}  // namespace levythin::cli
