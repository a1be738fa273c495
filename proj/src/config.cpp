#include "spinmech/config.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "spinmech/constants.hpp"
#include "spinmech/toml.hpp"

namespace spinmech::toml {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

// Strips a trailing comment that is not inside a quoted string.
std::string strip_comment(const std::string& s) {
  bool in_str = false;
  for (size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"') in_str = !in_str;
    if (s[i] == '#' && !in_str) return s.substr(0, i);
  }
  return s;
}

Value parse_value(const std::string& raw, int line) {
  std::string v = trim(raw);
  if (v.empty()) throw ParseError("line " + std::to_string(line) + ": missing value");
  if (v == "true") return true;
  if (v == "false") return false;
  if (v.front() == '"') {
    if (v.size() < 2 || v.back() != '"')
      throw ParseError("line " + std::to_string(line) + ": unterminated string");
    return v.substr(1, v.size() - 2);
  }
  // integer if it parses fully without . e E
  if (v.find_first_of(".eE") == std::string::npos) {
    try {
      size_t pos = 0;
      long long n = std::stoll(v, &pos);
      if (pos == v.size()) return n;
    } catch (...) {
    }
  }
  try {
    size_t pos = 0;
    double d = std::stod(v, &pos);
    if (pos == v.size()) return d;
  } catch (...) {
  }
  throw ParseError("line " + std::to_string(line) + ": cannot parse value '" + v + "'");
}

}  // namespace

Table parse(const std::string& text) {
  Table t;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string s = trim(strip_comment(line));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']')
        throw ParseError("line " + std::to_string(lineno) + ": malformed section header");
      section = trim(s.substr(1, s.size() - 2));
      if (section.empty())
        throw ParseError("line " + std::to_string(lineno) + ": empty section name");
      continue;
    }
    size_t eq = s.find('=');
    if (eq == std::string::npos)
      throw ParseError("line " + std::to_string(lineno) + ": expected 'key = value'");
    std::string key = trim(s.substr(0, eq));
    if (key.empty()) throw ParseError("line " + std::to_string(lineno) + ": empty key");
    t.set(section, key, parse_value(s.substr(eq + 1), lineno));
  }
  return t;
}

Table parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

const Value& Table::at(const std::string& section, const std::string& key) const {
  auto it = values_.find(section + "." + key);
  if (it == values_.end())
    throw ParseError("missing config key [" + section + "] " + key);
  return it->second;
}

double Table::get_number(const std::string& section, const std::string& key) const {
  const Value& v = at(section, key);
  if (std::holds_alternative<double>(v)) return std::get<double>(v);
  if (std::holds_alternative<long long>(v)) return double(std::get<long long>(v));
  throw ParseError("config key [" + section + "] " + key + " is not a number");
}

double Table::get_number_or(const std::string& section, const std::string& key,
                            double fallback) const {
  return has(section, key) ? get_number(section, key) : fallback;
}

bool Table::get_bool_or(const std::string& section, const std::string& key, bool fallback) const {
  if (!has(section, key)) return fallback;
  const Value& v = at(section, key);
  if (!std::holds_alternative<bool>(v))
    throw ParseError("config key [" + section + "] " + key + " is not a boolean");
  return std::get<bool>(v);
}

std::string Table::get_string(const std::string& section, const std::string& key) const {
  const Value& v = at(section, key);
  if (!std::holds_alternative<std::string>(v))
    throw ParseError("config key [" + section + "] " + key + " is not a string");
  return std::get<std::string>(v);
}

std::string Table::get_string_or(const std::string& section, const std::string& key,
                                 const std::string& fallback) const {
  return has(section, key) ? get_string(section, key) : fallback;
}

}  // namespace spinmech::toml

namespace spinmech {

namespace {

using toml::ParseError;
using toml::Table;

// Angular frequencies may be given either directly (rad/s) or as a
// `<name>_2pi_hz` entry meaning 2pi * value. Exactly one form is required.
double angular(const Table& t, const std::string& sec, const std::string& key, bool required = true,
               double fallback = 0.0) {
  const std::string alt = key + "_2pi_hz";
  const bool has_plain = t.has(sec, key), has_alt = t.has(sec, alt);
  if (has_plain && has_alt)
    throw ParseError("config: give only one of [" + sec + "] " + key + " / " + alt);
  if (has_plain) return t.get_number(sec, key);
  if (has_alt) return constants::from_2pi_hz(t.get_number(sec, alt));
  if (required) throw ParseError("missing config key [" + sec + "] " + key + " (or " + alt + ")");
  return fallback;
}

}  // namespace

SystemConfig load_config(const std::string& path) {
  Table t = toml::parse_file(path);
  SystemConfig cfg;

  cfg.laser.power_W = t.get_number("laser", "power_W");
  cfg.laser.omega_L = angular(t, "laser", "omega_L");
  cfg.laser.detuning_Delta = angular(t, "laser", "detuning_Delta");
  cfg.laser.waist_w0 = t.get_number("laser", "waist_w0");

  cfg.atoms.dipole_mu_plus = t.get_number("atoms", "dipole_mu_plus");
  cfg.atoms.dipole_mu_minus = t.get_number("atoms", "dipole_mu_minus");
  cfg.atoms.gamma_spont = angular(t, "atoms", "gamma_spont");
  cfg.atoms.omega_at = angular(t, "atoms", "omega_at");
  cfg.atoms.area_density_rhoA = t.get_number("atoms", "area_density_rhoA");
  cfg.gamma_at_cool = t.get_number_or("atoms", "gamma_at_cool", 0.0);

  const std::string variant = t.get_string("mechanics", "variant");
  if (variant == "ideal_mirror") cfg.mech.variant = MechVariant::IdealMirror;
  else if (variant == "optomech_cavity") cfg.mech.variant = MechVariant::OptomechCavity;
  else if (variant == "membrane_in_middle") cfg.mech.variant = MechVariant::MembraneInMiddle;
  else throw ParseError("config: unknown mechanics.variant '" + variant + "'");
  cfg.mech.omega_m = angular(t, "mechanics", "omega_m");
  cfg.mech.mass_M = t.get_number("mechanics", "mass_M");
  cfg.mech.quality_Q = t.get_number("mechanics", "quality_Q");
  cfg.mech.bath_T0 = t.get_number("mechanics", "bath_T0");
  cfg.mech.heating_dT_per_W = t.get_number_or("mechanics", "heating_dT_per_W", 0.0);
  if (cfg.mech.variant == MechVariant::OptomechCavity) {
    cfg.mech.g0 = angular(t, "mechanics", "g0");
    cfg.mech.kappa = angular(t, "mechanics", "kappa");
  }
  if (cfg.mech.variant == MechVariant::MembraneInMiddle) {
    cfg.mech.reflectivity_r = t.get_number("mechanics", "reflectivity_r");
    cfg.mech.finesse_F = t.get_number("mechanics", "finesse_F");
  }

  cfg.geometry.ensemble_length_m = t.get_number_or("geometry", "ensemble_length_m", 0.01);
  cfg.geometry.atom_mass_kg = t.get_number_or("geometry", "atom_mass_kg", 1.44316060e-25);

  const std::string area = t.get_string_or("conventions", "area", "pi_w0_squared");
  if (area == "pi_w0_squared") cfg.conventions.area = AreaConvention::PiW0Squared;
  else if (area == "pi_w0_squared_over_two")
    cfg.conventions.area = AreaConvention::PiW0SquaredOverTwo;
  else throw ParseError("config: unknown conventions.area '" + area + "'");
  cfg.conventions.rabi_halving = t.get_bool_or("conventions", "rabi_halving", false);

  validate(cfg.laser);
  validate(cfg.atoms);
  validate(cfg.mech);
  if (cfg.gamma_at_cool < 0) throw ParseError("config: atoms.gamma_at_cool must be >= 0");
  return cfg;
}

}  // namespace spinmech
