#pragma once

#include <Eigen/Dense>

#include <map>
#include <string>
#include <vector>

#include "spinmech/fock.hpp"

// Discrete time-bin simulation of the cascaded light-matter interaction:
// per vacuum bin the system couples in causal order atoms -> mirror ->
// atoms, with the pi/4 Faraday rotation of the sideband field toggled by
// phase_shift_enabled. Retardation survives only as this intra-bin
// ordering. Fitting the reduced moment dynamics to a Lindblad generator
// recovers the effective coupling, the mechanical diffusion rate and (with
// the phase shift off) the collective atomic backaction term.
namespace spinmech::collision {

using fock::CMat;

struct CascadeConfig {
  double dt_bin = 0;
  int dim_field = 2;  // per-bin Fock truncation of each polarisation mode
  int dim_mech = 6;
  int dim_spin = 6;
  bool phase_shift_enabled = true;
  double g_m = 0;         // sqrt(rad/s)
  double g_at_sqrtN = 0;  // sqrt(N) g_at, sqrt(rad/s)
  double omega_m = 0;
  double omega_spin = 0;
  int n_bins = 0;
  int snapshot_stride = 5;
  double probe_displacement = 0.25;

  void validate() const;
};

// Unitary of one collision on (mech x spin) x (bin_c x bin_d).
CMat step_unitary(const CascadeConfig& cfg);

// Vacuum-input Kraus decomposition of the single-collision channel; the
// same map as step_unitary followed by a partial trace over the bins.
std::vector<CMat> collision_kraus(const CascadeConfig& cfg);

CMat apply_channel(const std::vector<CMat>& kraus, const CMat& rho);

struct GeneratorEstimate {
  Eigen::Matrix4d drift_A;        // fitted d<r>/dt = A <r> + b
  Eigen::Vector4d drift_b;
  Eigen::Matrix4d diffusion_D;    // fitted d sigma/dt = A sigma + sigma A^T + D
  Eigen::Matrix4d quad_coeffs;    // G: H = (1/2) r^T G r + h_lin^T r
  Eigen::Vector4d lin_coeffs;
  Eigen::Matrix4d kossakowski_re; // Re part over jumps (X_m, P_m, X_s, P_s)
  std::map<std::string, double> dissipator_rates;
  double fit_residual = 0;
  double max_boundary_population = 0;

  double coupling_coeff() const { return quad_coeffs(0, 2); }          // X_m X_s
  double backaction_coeff(double omega_spin = 0) const {               // X_s^2 + P_s^2
    return 0.25 * (quad_coeffs(2, 2) + quad_coeffs(3, 3)) - 0.5 * omega_spin;
  }
};

// Moment-probe fit of the reduced per-bin dynamics over the basis of
// monomials up to quadratic in (X_m, P_m, X_s, P_s); deviations from
// linear moment dynamics end up in fit_residual.
GeneratorEstimate extract_generator(const CascadeConfig& cfg);

// Fitted coefficient of (X_s^2 + P_s^2) after removing the free spin
// rotation; approx -(sqrt(N) g_at)^2 with the phase shift off, approx 0
// with it on.
double detect_backaction(const CascadeConfig& cfg);

struct EliminationTargets {
  double coupling_coeff;   // -2 sqrt(N) g_at g_m (phase on)
  double gamma_m_diff;     // 2 g_m^2
  double backaction;       // -(sqrt(N) g_at)^2 (phase off), 0 (phase on)
  double cross_coeff_off;  // -sqrt(2) sqrt(N) g_at g_m (phase off)
};
EliminationTargets targets(const CascadeConfig& cfg);

// Decomposes moment-dynamics matrices into Hamiltonian coefficients and the
// real Kossakowski block over quadrature jumps:
//   G = sym(Omega^-1 A), M_re = Omega^T D Omega, h_lin = Omega^-1 b.
void decompose_generator(const Eigen::Matrix4d& A, const Eigen::Vector4d& b,
                         const Eigen::Matrix4d& D, Eigen::Matrix4d& G, Eigen::Vector4d& h_lin,
                         Eigen::Matrix4d& M_re);

}  // namespace spinmech::collision
