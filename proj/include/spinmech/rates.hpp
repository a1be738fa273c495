#pragma once

#include "spinmech/config.hpp"
#include "spinmech/params.hpp"

// Closed-form coupling and decoherence rates plus the derived figures of
// merit. All functions are pure; rates are stored as magnitudes with the
// sign of the detuning kept separately so red/blue detuning stays explicit.
//
// Unit note: the light-coupling elements g_m and g_at multiply white-noise
// field operators and carry units of sqrt(rad/s); products like 2 g_m^2 and
// 2 sqrt(N) g_at g_m are genuine rates in rad/s.
namespace spinmech {

struct RateSet {
  double g_m = 0;            // sqrt(rad/s)
  double g_at = 0;           // sqrt(rad/s)
  double g_eff = 0;          // rad/s
  double gamma_m_diff = 0;   // rad/s
  double gamma_at_diff = 0;  // rad/s
  double gamma_m_th = 0;     // rad/s
  double gamma_at_cool = 0;  // rad/s, external repump input
  double omega_OL = 0;       // rad/s, trap-shift magnitude
  double coop_C0 = 0;        // 4 g^2 / (gamma_m_tot gamma_at_diff)
  double coop_C = 0;         // 4 g^2 / (gamma_m_tot gamma_at_tot)
  int detuning_sign = 1;

  double gamma_m_tot() const { return gamma_m_diff + gamma_m_th; }
  double gamma_at_tot() const { return gamma_at_diff + gamma_at_cool; }
};

// Mirror-light coupling element alpha k_L ell_m / sqrt(pi).
double g_m_mirror(const DerivedQuantities& d);

// Generic single-sided optomechanical cavity: (2 alpha / sqrt(pi)) g0/kappa.
double g_m_optomech(const DerivedQuantities& d, double g0, double kappa);

// Membrane in the middle, finesse-enhanced:
// alpha (k_L ell_m / sqrt(2 pi)) 2 |r_m| (2 F / pi).
double g_m_mim(const DerivedQuantities& d, double r_m, double finesse);

// Two-photon atom-field coupling magnitude; proportional to
// mu+ mu- alpha E^2 / Delta with the configured Rabi convention folded in
// through the stored Rabi frequencies.
double g_at_coupling(const DerivedQuantities& d, double Delta);

// g_eff = 2 sqrt(N) g_at g_m; for the ideal-mirror g_m this must equal
// sqrt(N/2) (Omega+ Omega- / Delta) k_L ell_m.
double g_eff_coupling(double atom_number_N, double g_at, double g_m);
double g_eff_from_rabi(const DerivedQuantities& d, double Delta);

double gamma_m_diff(double g_m);

// Single-atom photon scattering rate Gamma Omega^2/(Gamma^2+4Delta^2+2Omega^2).
double gamma_at_diff(double Gamma, double Omega, double Delta);

// Thermal decoherence k_B (T0 + T_eff) / (hbar Q) with T_eff = dT/dP * P.
double gamma_m_th(const MechParams& mech, double power_W);

// Trap-shift magnitude Omega_OL = Omega_-^2 / |Delta| (stored convention).
double omega_OL(const DerivedQuantities& d, double Delta);

// Splitting that puts the shifted atomic transition on mechanical
// resonance: omega_at = omega_m - sign(Delta) Omega_OL / 2.
double required_omega_at(double omega_m, double omega_OL_mag, int detuning_sign);

double cooperativity(double g_eff, double gamma_m_tot, double gamma_at_tot);

enum class Stability { Stable, Marginal, Unstable };

// Stable iff gamma_at_tot^2 + 4 omega_m^2 > 4 g_eff^2, with a relative
// band eps around equality reported as Marginal.
Stability stability_inequality(double g_eff, double omega_m, double gamma_at_tot,
                               double eps = 1e-9);

// Internal-state vs. motional-coupling advantage 1/(k_L ell_at), the
// inverse atomic Lamb-Dicke parameter.
double motional_comparison(const DerivedQuantities& d, double omega_at, double atom_mass);

// Dispatches g_m on the mechanics variant and assembles the full RateSet.
RateSet compute_rates(const SystemConfig& cfg);
RateSet compute_rates(const LaserParams& laser, const AtomParams& atoms, const MechParams& mech,
                      const Conventions& conv, double gamma_at_cool = 0);

}  // namespace spinmech
