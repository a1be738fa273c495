#pragma once

#include <string>

#include "spinmech/params.hpp"

namespace spinmech {

struct GeometryParams {
  double ensemble_length_m = 0.01;      // atomic cloud length along the beam
  double atom_mass_kg = 1.44316060e-25; // Rb-87 by default
};

// One structured text file (TOML syntax) feeds every subcommand. Sections:
// [laser], [atoms], [mechanics], [geometry], [conventions]; field names
// match the parameter structs. Angular frequencies accept either `name`
// (rad/s) or `name_2pi_hz` (value in Hz, times 2pi).
struct SystemConfig {
  LaserParams laser;
  AtomParams atoms;
  MechParams mech;
  GeometryParams geometry;
  Conventions conventions;
  double gamma_at_cool = 0;  // external repump rate, input not derived
};

SystemConfig load_config(const std::string& path);

}  // namespace spinmech
