#include "spinmech/rates.hpp"

#include <cmath>
#include <stdexcept>

#include "spinmech/constants.hpp"

namespace spinmech {

using constants::pi;

double g_m_mirror(const DerivedQuantities& d) {
  return std::sqrt(d.alpha_sq) * d.k_L * d.ell_m / std::sqrt(pi);
}

double g_m_optomech(const DerivedQuantities& d, double g0, double kappa) {
  if (!(kappa > 0)) throw std::invalid_argument("g_m_optomech: kappa must be > 0");
  return 2.0 * std::sqrt(d.alpha_sq) / std::sqrt(pi) * (g0 / kappa);
}

double g_m_mim(const DerivedQuantities& d, double r_m, double finesse) {
  if (r_m < 0 || r_m > 1) throw std::invalid_argument("g_m_mim: reflectivity must be in [0,1]");
  if (finesse < 1) throw std::invalid_argument("g_m_mim: finesse must be >= 1");
  return std::sqrt(d.alpha_sq) * d.k_L * d.ell_m / std::sqrt(2.0 * pi) * 2.0 * std::abs(r_m) *
         (2.0 * finesse / pi);
}

double g_at_coupling(const DerivedQuantities& d, double Delta) {
  if (Delta == 0.0) throw std::invalid_argument("g_at: detuning Delta must be nonzero");
  if (d.alpha_sq == 0.0) return 0.0;
  // Written through the stored Rabi frequencies so the configured
  // convention enters both coupling routes identically.
  return std::sqrt(pi / 8.0) * d.rabi_plus * d.rabi_minus /
         (std::abs(Delta) * std::sqrt(d.alpha_sq));
}

double g_eff_coupling(double atom_number_N, double g_at, double g_m) {
  return 2.0 * std::sqrt(atom_number_N) * g_at * g_m;
}

double g_eff_from_rabi(const DerivedQuantities& d, double Delta) {
  if (Delta == 0.0) throw std::invalid_argument("g_eff_from_rabi: Delta must be nonzero");
  return std::sqrt(d.atom_number_N / 2.0) * d.rabi_plus * d.rabi_minus / std::abs(Delta) * d.k_L *
         d.ell_m;
}

double gamma_m_diff(double g_m) {
  if (g_m < 0) throw std::invalid_argument("gamma_m_diff: g_m must be >= 0");
  return 2.0 * g_m * g_m;
}

double gamma_at_diff(double Gamma, double Omega, double Delta) {
  if (!(Gamma > 0)) throw std::invalid_argument("gamma_at_diff: Gamma must be > 0");
  return Gamma * Omega * Omega / (Gamma * Gamma + 4.0 * Delta * Delta + 2.0 * Omega * Omega);
}

double gamma_m_th(const MechParams& mech, double power_W) {
  if (!(mech.quality_Q > 0)) throw std::invalid_argument("gamma_m_th: quality_Q must be > 0");
  const double T_eff = mech.heating_dT_per_W * power_W;
  return constants::k_boltzmann * (mech.bath_T0 + T_eff) / (constants::hbar * mech.quality_Q);
}

double omega_OL(const DerivedQuantities& d, double Delta) {
  if (Delta == 0.0) throw std::invalid_argument("omega_OL: Delta must be nonzero");
  return d.rabi_minus * d.rabi_minus / std::abs(Delta);
}

double required_omega_at(double omega_m, double omega_OL_mag, int detuning_sign) {
  return omega_m - 0.5 * detuning_sign * omega_OL_mag;
}

double cooperativity(double g_eff, double gamma_m_tot, double gamma_at_tot) {
  if (!(gamma_m_tot > 0) || !(gamma_at_tot > 0))
    throw std::invalid_argument("cooperativity: decoherence rates must be > 0");
  return 4.0 * g_eff * g_eff / (gamma_m_tot * gamma_at_tot);
}

Stability stability_inequality(double g_eff, double omega_m, double gamma_at_tot, double eps) {
  if (!(omega_m > 0)) throw std::invalid_argument("stability_inequality: omega_m must be > 0");
  const double lhs = gamma_at_tot * gamma_at_tot + 4.0 * omega_m * omega_m;
  const double rhs = 4.0 * g_eff * g_eff;
  const double margin = (lhs - rhs) / lhs;
  if (margin > eps) return Stability::Stable;
  if (margin < -eps) return Stability::Unstable;
  return Stability::Marginal;
}

double motional_comparison(const DerivedQuantities& d, double omega_at, double atom_mass) {
  if (!(omega_at > 0) || !(atom_mass > 0))
    throw std::invalid_argument("motional_comparison: inputs must be > 0");
  const double ell_at = std::sqrt(constants::hbar / (2.0 * atom_mass * omega_at));
  return 1.0 / (d.k_L * ell_at);
}

RateSet compute_rates(const LaserParams& laser, const AtomParams& atoms, const MechParams& mech,
                      const Conventions& conv, double gamma_at_cool) {
  const DerivedQuantities d = derive_all(laser, atoms, mech, conv);
  const double Delta = laser.detuning_Delta;
  if (Delta == 0.0) throw std::invalid_argument("compute_rates: detuning Delta must be nonzero");

  RateSet r;
  r.detuning_sign = Delta > 0 ? 1 : -1;
  switch (mech.variant) {
    case MechVariant::IdealMirror:
      r.g_m = g_m_mirror(d);
      break;
    case MechVariant::OptomechCavity:
      r.g_m = g_m_optomech(d, mech.g0, mech.kappa);
      break;
    case MechVariant::MembraneInMiddle:
      r.g_m = g_m_mim(d, mech.reflectivity_r, mech.finesse_F);
      break;
  }
  r.g_at = g_at_coupling(d, Delta);
  r.g_eff = g_eff_coupling(d.atom_number_N, r.g_at, r.g_m);
  r.gamma_m_diff = gamma_m_diff(r.g_m);
  r.gamma_at_diff = gamma_at_diff(atoms.gamma_spont, d.rabi_minus, Delta);
  r.gamma_m_th = gamma_m_th(mech, laser.power_W);
  r.gamma_at_cool = gamma_at_cool;
  r.omega_OL = omega_OL(d, Delta);
  if (r.gamma_m_tot() > 0 && r.gamma_at_diff > 0)
    r.coop_C0 = cooperativity(r.g_eff, r.gamma_m_tot(), r.gamma_at_diff);
  if (r.gamma_m_tot() > 0 && r.gamma_at_tot() > 0)
    r.coop_C = cooperativity(r.g_eff, r.gamma_m_tot(), r.gamma_at_tot());
  return r;
}

RateSet compute_rates(const SystemConfig& cfg) {
  return compute_rates(cfg.laser, cfg.atoms, cfg.mech, cfg.conventions, cfg.gamma_at_cool);
}

}  // namespace spinmech
