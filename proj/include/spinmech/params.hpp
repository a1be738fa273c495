#pragma once

#include <string>
#include <vector>

// Laboratory-level inputs and the derived single quantities every rate
// formula consumes. All frequencies are angular (rad/s), all other units SI.
namespace spinmech {

enum class AreaConvention {
  PiW0Squared,         // beam area pi w0^2 (default)
  PiW0SquaredOverTwo,  // beam area pi w0^2 / 2
};

// Convention switches that shift rates by O(1) factors. They are explicit
// configuration, not buried constants: the beam-area choice rescales the
// mode amplitude by sqrt(2), the Rabi convention halves Omega_{+,-}.
// Golden-value tests record which pair they were computed under.
struct Conventions {
  AreaConvention area = AreaConvention::PiW0Squared;
  bool rabi_halving = false;
};

struct LaserParams {
  double power_W = 0;         // running-wave power
  double omega_L = 0;         // laser angular frequency
  double detuning_Delta = 0;  // omega_L - omega_es, signed
  double waist_w0 = 0;        // beam waist at the ensemble
};

struct AtomParams {
  double dipole_mu_plus = 0;   // C m
  double dipole_mu_minus = 0;  // C m
  double gamma_spont = 0;      // spontaneous emission rate
  double omega_at = 0;         // ground-state splitting
  double area_density_rhoA = 0;  // atoms per m^2
};

enum class MechVariant { IdealMirror, OptomechCavity, MembraneInMiddle };

struct MechParams {
  MechVariant variant = MechVariant::IdealMirror;
  double omega_m = 0;
  double mass_M = 0;
  double quality_Q = 0;
  double bath_T0 = 0;          // K
  double heating_dT_per_W = 0; // laser-absorption heating coefficient, K/W
  // OptomechCavity payload
  double g0 = 0;
  double kappa = 0;
  // MembraneInMiddle payload
  double reflectivity_r = 0;
  double finesse_F = 1;
};

struct DerivedQuantities {
  double alpha_sq = 0;       // photon flux alpha^2, 1/s
  double field_amp_E = 0;    // mode amplitude E_{omega_L} per sqrt(photon flux)
  double rabi_plus = 0;      // Omega_+, rad/s (convention applied)
  double rabi_minus = 0;     // Omega_-, rad/s (convention applied)
  double ell_m = 0;          // mechanical zero-point length, m
  double atom_number_N = 0;  // atoms inside the beam
  double k_L = 0;            // laser wavenumber, 1/m
  std::vector<std::string> warnings;
};

void validate(const LaserParams& p);
void validate(const AtomParams& p);
void validate(const MechParams& p);

// alpha^2 = 2 pi P / (hbar omega_L)
double alpha_sq_from_power(const LaserParams& laser);

// E_omega = sqrt(hbar omega_L / (pi c eps0 A)) with A from the configured
// beam-area convention.
double field_amplitude(const LaserParams& laser, AreaConvention area);

double zero_point_length(double mass_M, double omega_m);

// Populates every derived quantity; pure function of its inputs.
DerivedQuantities derive_all(const LaserParams& laser, const AtomParams& atoms,
                             const MechParams& mech, const Conventions& conv = {});

}  // namespace spinmech
