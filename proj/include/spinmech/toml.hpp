#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <variant>

// Minimal TOML reader covering the flat config schema used here: [section]
// headers, `key = value` pairs with float/integer/boolean/string values and
// `#` comments. Anything outside that subset is rejected with a line number.
namespace spinmech::toml {

using Value = std::variant<double, long long, bool, std::string>;

struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

class Table {
 public:
  void set(const std::string& section, const std::string& key, Value v) {
    values_[section + "." + key] = std::move(v);
  }
  bool has(const std::string& section, const std::string& key) const {
    return values_.count(section + "." + key) > 0;
  }
  double get_number(const std::string& section, const std::string& key) const;
  double get_number_or(const std::string& section, const std::string& key, double fallback) const;
  bool get_bool_or(const std::string& section, const std::string& key, bool fallback) const;
  std::string get_string(const std::string& section, const std::string& key) const;
  std::string get_string_or(const std::string& section, const std::string& key,
                            const std::string& fallback) const;
  const std::map<std::string, Value>& entries() const { return values_; }

 private:
  const Value& at(const std::string& section, const std::string& key) const;
  std::map<std::string, Value> values_;
};

Table parse(const std::string& text);
Table parse_file(const std::string& path);

}  // namespace spinmech::toml
