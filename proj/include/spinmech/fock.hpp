#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <utility>

#include "spinmech/gaussian.hpp"
#include "spinmech/rates.hpp"

// Brute-force truncated-Fock-space Liouvillian solver. This is the
// independent oracle for the Gaussian engine at small occupation; the spin
// wave enters as a single bosonic mode. Dense only, no sparse machinery.
namespace spinmech::fock {

using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

struct TruncatedSpace {
  int dim_mech = 2;
  int dim_spin = 2;
  int cap = 4096;  // bound on dim_mech * dim_spin

  int dim() const { return dim_mech * dim_spin; }
  void validate() const {
    if (dim_mech < 2 || dim_spin < 2)
      throw std::invalid_argument("TruncatedSpace: dims must be >= 2");
    if (dim() > cap)
      throw std::invalid_argument("TruncatedSpace: dim_mech*dim_spin exceeds cap");
  }
};

struct DegenerateSteadyState : std::runtime_error {
  explicit DegenerateSteadyState(double rcond_)
      : std::runtime_error("steady state is not unique (rcond " + std::to_string(rcond_) + ")"),
        rcond(rcond_) {}
  double rcond;
};

struct TruncationSuspect : std::runtime_error {
  TruncationSuspect(double mech_pop, double spin_pop)
      : std::runtime_error("boundary Fock populations too large: mech " +
                           std::to_string(mech_pop) + ", spin " + std::to_string(spin_pop)),
        boundary_mech(mech_pop),
        boundary_spin(spin_pop) {}
  double boundary_mech;
  double boundary_spin;
};

struct Operators {
  CMat a_m, S;          // annihilation operators on the product space
  CMat X_m, P_m, X_s, P_s;
  CMat n_m, n_s;
};

CMat destroy_op(int n);
Operators make_operators(const TruncatedSpace& space);

CMat hamiltonian(const TruncatedSpace& space, const HamiltonianChoice& h, double g_eff);

// Dense superoperator of the effective master equation (column-stacking
// convention). Jump operators: X_m, S, a_m, a_m^dag.
CMat build_liouvillian(const TruncatedSpace& space, const HamiltonianChoice& h,
                       const RateSet& rates, double N_m);

struct SteadyStateResult {
  CMat rho;
  double residual = 0;       // |L rho|_2 / |L|_F
  double boundary_mech = 0;  // population of the top mechanical level
  double boundary_spin = 0;
  double rcond = 0;
};

// Unique trace-one steady state via a trace-constrained dense solve.
// Throws DegenerateSteadyState when the null space is not one-dimensional
// and TruncationSuspect when boundary populations exceed the threshold.
SteadyStateResult steady_state_nullspace(const CMat& L, const TruncatedSpace& space,
                                         double boundary_threshold = 1e-4);

CMat evolve_fock(const CMat& L, const CMat& rho0, double t, double rtol = 1e-9,
                 double atol = 1e-12);

double occupation_fock(const CMat& rho, const Operators& ops, Mode mode);

// Quadrature means and symmetrised covariance of a state.
std::pair<Eigen::Vector4d, Eigen::Matrix4d> moments_from_rho(const CMat& rho,
                                                             const Operators& ops);

// Hermiticity / trace / positivity sanity margins of a density operator.
struct StateChecks {
  double hermiticity;  // |rho - rho^dag|_F
  double trace_error;  // |tr(rho) - 1|
  double min_eigenvalue;
};
StateChecks check_state(const CMat& rho);

double boundary_population_mech(const CMat& rho, const TruncatedSpace& space);
double boundary_population_spin(const CMat& rho, const TruncatedSpace& space);

}  // namespace spinmech::fock
