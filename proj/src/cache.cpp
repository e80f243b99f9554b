#include "dgforge/cache.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <system_error>

#include <unistd.h>

#include <json.hpp>

namespace dgforge {

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ReportCache::ReportCache(std::filesystem::path dir, std::string engine_version)
    : dir_(std::move(dir)), version_(std::move(engine_version)) {}

std::optional<ReportCache> ReportCache::from_environment(const std::string& engine_version) {
  const char* dir = std::getenv("DGFORGE_CACHE_DIR");
  if (!dir || !*dir) return std::nullopt;
  return ReportCache(dir, engine_version);
}

std::filesystem::path ReportCache::entry_path(const std::string& key) const {
  return dir_ / (key + ".json");
}

std::optional<std::string> ReportCache::lookup(const std::string& key) const {
  std::ifstream in(entry_path(key), std::ios::binary);
  if (!in) return std::nullopt;
  std::stringstream buf;
  buf << in.rdbuf();
  auto entry = nlohmann::json::parse(buf.str(), nullptr, false);
  if (entry.is_discarded() || !entry.is_object()) return std::nullopt;
  if (entry.value("engine_version", "") != version_ || entry.value("key", "") != key) return std::nullopt;
  auto report = entry.find("report");
  if (report == entry.end() || !report->is_string()) return std::nullopt;
  return report->get<std::string>();
}

void ReportCache::store(const std::string& key, const std::string& report) const {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) return;
  nlohmann::json entry{{"engine_version", version_}, {"key", key}, {"report", report}};
  auto tmp = dir_ / (key + ".json.tmp." + std::to_string(::getpid()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) return;
    out << entry.dump();
    if (!out) {
      out.close();
      std::filesystem::remove(tmp, ec);
      return;
    }
  }
  std::filesystem::rename(tmp, entry_path(key), ec);
  if (ec) std::filesystem::remove(tmp, ec);
}

}  // namespace dgforge
