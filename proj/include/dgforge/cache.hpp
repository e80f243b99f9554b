#pragma once

// Report cache on disk. Entries are keyed by a content hash and carry the
// engine version; a version mismatch counts as a miss. Writes go through a
// temporary file and a rename.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

namespace dgforge {

std::uint64_t fnv1a64(std::string_view data);
std::string hex64(std::uint64_t h);

class ReportCache {
 public:
  explicit ReportCache(std::filesystem::path dir, std::string engine_version);
  // The directory named by DGFORGE_CACHE_DIR, if set and non-empty.
  static std::optional<ReportCache> from_environment(const std::string& engine_version);

  std::optional<std::string> lookup(const std::string& key) const;
  // Failures to write are ignored: the cache is an optimisation.
  void store(const std::string& key, const std::string& report) const;

  std::filesystem::path entry_path(const std::string& key) const;

 private:
  std::filesystem::path dir_;
  std::string version_;
};

}  // namespace dgforge
