#include "spinmech/io.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace spinmech::io {

nlohmann::json RunManifest::to_json() const {
  return {{"config_path", config_path}, {"config_hash", config_hash},
          {"subcommand", subcommand},   {"conventions", conventions},
          {"version", version},         {"schema_version", schema_version},
          {"timestamp", timestamp}};
}

std::string fnv1a_hex(const std::string& bytes) {
  unsigned long long h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", h);
  return buf;
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

RunManifest make_manifest(const std::string& config_path, const std::string& subcommand,
                          const std::string& conventions) {
  RunManifest m;
  m.config_path = config_path;
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (in) {
      std::stringstream ss;
      ss << in.rdbuf();
      m.config_hash = fnv1a_hex(ss.str());
    }
  }
  m.subcommand = subcommand;
  m.conventions = conventions;
  m.timestamp = utc_timestamp();
  return m;
}

void atomic_write(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + tmp);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("rename failed for: " + path);
}

std::string conventions_string(bool rabi_halving, bool area_over_two) {
  std::string s = area_over_two ? "area=pi_w0_squared_over_two" : "area=pi_w0_squared";
  s += rabi_halving ? ",rabi_halving=true" : ",rabi_halving=false";
  return s;
}

}  // namespace spinmech::io
