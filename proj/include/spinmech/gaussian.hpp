#pragma once

#include <Eigen/Dense>

#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "spinmech/rates.hpp"

// Exact solver for the effective two-mode master equation via first and
// second moments of the quadrature vector r = (X_m, P_m, X_s, P_s).
// Conventions: [X, P] = i, vacuum variance 1/2; these hold everywhere,
// including the Fock-space oracle.
namespace spinmech {

enum class HamiltonianVariant {
  FullQuadrature,   // -g_eff X_m X_s, both mode frequencies kept
  BeamsplitterRWA,  // -g_eff (a_m^dag S + S^dag a_m), valid for g_eff < omega_m
};

struct HamiltonianChoice {
  HamiltonianVariant variant = HamiltonianVariant::FullQuadrature;
  double omega_m = 0;
  double delta_resonance = 0;  // residual detuning of the spin mode, 0 on resonance

  double omega_spin() const { return omega_m + delta_resonance; }
};

struct GaussianModel {
  Eigen::Matrix4d drift_A;     // d<r>/dt = A <r>
  Eigen::Matrix4d diffusion_D; // d sigma/dt = A sigma + sigma A^T + D
};

struct MomentState {
  Eigen::Vector4d mean = Eigen::Vector4d::Zero();
  Eigen::Matrix4d cov = 0.5 * Eigen::Matrix4d::Identity();
};

struct UnstableModel : std::runtime_error {
  explicit UnstableModel(double abscissa_)
      : std::runtime_error("model has no steady state: spectral abscissa " +
                           std::to_string(abscissa_) + " >= 0"),
        abscissa(abscissa_) {}
  double abscissa;
};

// Moment-equation matrices for the effective master equation with jump
// operators {X_m, S, a_m, a_m^dag}: mechanical quadrature diffusion at
// gamma_m_diff, spin amplitude decay at gamma_at_diff + gamma_at_cool and
// a thermal mechanical bath with gamma_m = gamma_m_th / N_m.
GaussianModel build_model(const HamiltonianChoice& h, const RateSet& rates, double N_m);

double spectral_abscissa(const GaussianModel& model);

// Lyapunov steady state; throws UnstableModel when max Re lambda(A) >= 0.
MomentState steady_state(const GaussianModel& model);

// Frobenius-relative Lyapunov residual |A s + s A^T + D| / (|A||s| + |D|).
double lyapunov_residual(const GaussianModel& model, const MomentState& s);

enum class EvolveBackend { AdaptiveRK, MatrixExp };

MomentState evolve(const GaussianModel& model, const MomentState& s0, double t, double dt_max,
                   EvolveBackend backend = EvolveBackend::AdaptiveRK);

enum class Mode { Mechanics, Spin };

// Mean excitation number (<X^2> + <P^2> - 1)/2 of one mode.
double occupation(const MomentState& s, Mode mode);

// Least eigenvalue of cov + (i/2) Omega_s; >= -tol for a physical state.
double physicality_margin(const MomentState& s);

struct CoolingPoint {
  double g_eff = 0;
  double gamma_cool = 0;
  double n_ss = std::numeric_limits<double>::quiet_NaN();
  bool stable = false;
  std::string error;
};

// Steady-state occupation over a (g_eff, gamma_at_cool) grid; instability
// is recorded per point and the sweep continues.
std::vector<CoolingPoint> cooling_curve(const RateSet& base, const HamiltonianChoice& h,
                                        const std::vector<double>& geff_grid,
                                        const std::vector<double>& cool_grid, double N_m);

// Full single-excitation swap time pi / (2 g_eff) of the lossless
// beamsplitter interaction. When omega_m is supplied the RWA-validity
// guard g_eff < omega_m is enforced.
double rabi_exchange_period(const RateSet& rates,
                            double omega_m = std::numeric_limits<double>::infinity());

}  // namespace spinmech
