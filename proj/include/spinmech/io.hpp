#pragma once

#include <string>

#include <json.hpp>

namespace spinmech::io {

inline constexpr const char* tool_version = "0.1.0";
inline constexpr int schema_version = 1;

// Reproducibility record attached to every output artifact: either
// embedded in JSON under "manifest" or written alongside CSV as
// <file>.manifest.json.
struct RunManifest {
  std::string config_path;
  std::string config_hash;  // FNV-1a 64 over the config bytes
  std::string subcommand;
  std::string conventions;
  std::string version = tool_version;
  std::string timestamp;  // ISO 8601 UTC

  nlohmann::json to_json() const;
};

RunManifest make_manifest(const std::string& config_path, const std::string& subcommand,
                          const std::string& conventions);

std::string fnv1a_hex(const std::string& bytes);
std::string utc_timestamp();

// Writes via a temp file plus rename so failed runs leave no partial
// artifacts.
void atomic_write(const std::string& path, const std::string& content);

std::string conventions_string(bool rabi_halving, bool area_over_two);

}  // namespace spinmech::io
