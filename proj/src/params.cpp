#include "spinmech/params.hpp"

#include <cmath>
#include <stdexcept>

#include "spinmech/constants.hpp"

namespace spinmech {

namespace {
void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

double beam_area(double waist_w0, AreaConvention area) {
  double a = constants::pi * waist_w0 * waist_w0;
  if (area == AreaConvention::PiW0SquaredOverTwo) a *= 0.5;
  return a;
}
}  // namespace

void validate(const LaserParams& p) {
  require(p.power_W >= 0, "laser.power_W must be >= 0");
  require(p.omega_L > 0, "laser.omega_L must be > 0");
  require(p.waist_w0 > 0, "laser.waist_w0 must be > 0");
  require(std::isfinite(p.power_W) && std::isfinite(p.omega_L) && std::isfinite(p.detuning_Delta) &&
              std::isfinite(p.waist_w0),
          "laser parameters must be finite");
}

void validate(const AtomParams& p) {
  require(p.dipole_mu_plus > 0, "atoms.dipole_mu_plus must be > 0");
  require(p.dipole_mu_minus > 0, "atoms.dipole_mu_minus must be > 0");
  require(p.gamma_spont > 0, "atoms.gamma_spont must be > 0");
  require(p.omega_at > 0, "atoms.omega_at must be > 0");
  require(p.area_density_rhoA >= 0, "atoms.area_density_rhoA must be >= 0");
}

void validate(const MechParams& p) {
  require(p.omega_m > 0, "mechanics.omega_m must be > 0");
  require(p.mass_M > 0, "mechanics.mass_M must be > 0");
  require(p.quality_Q > 0, "mechanics.quality_Q must be > 0");
  require(p.bath_T0 >= 0, "mechanics.bath_T0 must be >= 0");
  require(p.heating_dT_per_W >= 0, "mechanics.heating_dT_per_W must be >= 0");
  if (p.variant == MechVariant::OptomechCavity) {
    require(p.g0 >= 0, "mechanics.g0 must be >= 0");
    require(p.kappa > 0, "mechanics.kappa must be > 0");
  }
  if (p.variant == MechVariant::MembraneInMiddle) {
    require(p.reflectivity_r >= 0 && p.reflectivity_r <= 1,
            "mechanics.reflectivity_r must be in [0,1]");
    require(p.finesse_F >= 1, "mechanics.finesse_F must be >= 1");
  }
}

double alpha_sq_from_power(const LaserParams& laser) {
  return constants::two_pi * laser.power_W / (constants::hbar * laser.omega_L);
}

double field_amplitude(const LaserParams& laser, AreaConvention area) {
  if (!(laser.waist_w0 > 0)) throw std::invalid_argument("field_amplitude: waist_w0 must be > 0");
  const double A = beam_area(laser.waist_w0, area);
  return std::sqrt(constants::hbar * laser.omega_L /
                   (constants::pi * constants::speed_of_light * constants::epsilon0 * A));
}

double zero_point_length(double mass_M, double omega_m) {
  return std::sqrt(constants::hbar / (2.0 * mass_M * omega_m));
}

DerivedQuantities derive_all(const LaserParams& laser, const AtomParams& atoms,
                             const MechParams& mech, const Conventions& conv) {
  validate(laser);
  validate(atoms);
  validate(mech);

  DerivedQuantities d;
  d.alpha_sq = alpha_sq_from_power(laser);
  d.field_amp_E = field_amplitude(laser, conv.area);
  d.ell_m = zero_point_length(mech.mass_M, mech.omega_m);
  d.k_L = laser.omega_L / constants::speed_of_light;
  // The atom number always uses the geometric beam disk pi w0^2; the area
  // convention applies to the mode normalisation only.
  d.atom_number_N = atoms.area_density_rhoA * constants::pi * laser.waist_w0 * laser.waist_w0;
  const double half = conv.rabi_halving ? 0.5 : 1.0;
  const double alpha = std::sqrt(d.alpha_sq);
  d.rabi_plus = half * atoms.dipole_mu_plus * alpha * d.field_amp_E / constants::hbar;
  d.rabi_minus = half * atoms.dipole_mu_minus * alpha * d.field_amp_E / constants::hbar;

  if (atoms.area_density_rhoA == 0.0)
    d.warnings.push_back("area_density_rhoA = 0: atom number N = 0, ensemble decoupled");
  if (d.atom_number_N > 0 && d.atom_number_N < 1)
    d.warnings.push_back("atom_number_N < 1: coupled-ensemble results not meaningful");
  return d;
}

}  // namespace spinmech
