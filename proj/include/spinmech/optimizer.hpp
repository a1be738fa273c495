#pragma once

#include <array>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "spinmech/config.hpp"
#include "spinmech/rates.hpp"

// Constrained derivative-free search over (P, Delta, w0): a deterministic
// coarse scan (log-spaced in P and Delta, linear in w0) followed by
// Nelder-Mead refinement from the best feasible point.
namespace spinmech::optimizer {

enum class Objective {
  MaxC0,
  MaxMinRatio,  // maximize min(g_eff/gamma_m_tot, g_eff/gamma_at_diff)
};

// Constraint margins. The adiabatic and saturation conditions are only
// "much less than" statements in the model; the margins make the chosen
// looseness explicit and every recorded result carries its values.
struct ConstraintSet {
  double adiabatic_chi = 1.0;     // Omega <= |Delta| / chi
  double saturation_s = 0.9;      // Omega^2 <= s (Gamma^2 + 4 Delta^2)/2
  double rwa_margin_r = 4.0;      // g_eff <= omega_m / r
  double ensemble_length_m = 0.01;  // pi w0^2 / lambda >= ensemble length

  void validate() const {
    if (adiabatic_chi < 1.0) throw std::invalid_argument("constraints: chi must be >= 1");
    if (!(saturation_s > 0.0 && saturation_s < 1.0))
      throw std::invalid_argument("constraints: s must be in (0,1)");
    if (rwa_margin_r < 1.0) throw std::invalid_argument("constraints: r must be >= 1");
    if (ensemble_length_m < 0) throw std::invalid_argument("constraints: ensemble length >= 0");
  }
};

struct SearchBounds {
  std::array<double, 2> power_W{0, 0};
  std::array<double, 2> detuning_mag{0, 0};  // |Delta|, sign taken from the base laser
  std::array<double, 2> waist_w0{0, 0};

  void validate() const;
};

struct SearchSpec {
  SearchBounds bounds;
  Objective objective = Objective::MaxMinRatio;
  ConstraintSet constraints;
  int grid_n = 16;
  int refine_iters = 200;
};

struct FixedParams {
  LaserParams laser_base;  // supplies omega_L and the detuning sign
  AtomParams atoms;
  MechParams mech;
  Conventions conventions;
  double gamma_at_cool = 0;
};

struct Evaluation {
  double power_W = 0, detuning = 0, waist_w0 = 0;
  double objective_raw = 0;  // objective value ignoring feasibility
  bool feasible = false;
  std::map<std::string, double> slacks;  // relative slack per constraint, >= 0 iff satisfied
  RateSet rates;
};

struct NoFeasiblePoint : std::runtime_error {
  explicit NoFeasiblePoint(const std::string& tightest)
      : std::runtime_error("no feasible point in the search grid; tightest constraint: " +
                           tightest),
        tightest_constraint(tightest) {}
  std::string tightest_constraint;
};

Evaluation evaluate(double power_W, double detuning_mag, double waist_w0, const FixedParams& fixed,
                    const ConstraintSet& constraints, Objective objective);

struct OptimizeResult {
  Evaluation best;
  std::vector<Evaluation> audit;  // every evaluated point, in order
};

OptimizeResult optimize(const SearchSpec& spec, const FixedParams& fixed);

FixedParams fixed_from_config(const SystemConfig& cfg);

}  // namespace spinmech::optimizer
