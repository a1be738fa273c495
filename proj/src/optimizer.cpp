#include "spinmech/optimizer.hpp"

#include <algorithm>
#include <cmath>

#include "spinmech/constants.hpp"

namespace spinmech::optimizer {

void SearchBounds::validate() const {
  auto ok = [](const std::array<double, 2>& b) {
    return std::isfinite(b[0]) && std::isfinite(b[1]) && b[0] > 0 && b[0] <= b[1];
  };
  if (!ok(power_W) || !ok(detuning_mag) || !ok(waist_w0))
    throw std::invalid_argument("SearchBounds: bounds must be finite, positive and ordered");
}

namespace {

double objective_value(const RateSet& r, Objective obj) {
  switch (obj) {
    case Objective::MaxC0:
      return r.coop_C0;
    case Objective::MaxMinRatio:
      return std::min(r.g_eff / r.gamma_m_tot(), r.g_eff / r.gamma_at_diff);
  }
  return 0;
}

}  // namespace

Evaluation evaluate(double power_W, double detuning_mag, double waist_w0, const FixedParams& fixed,
                    const ConstraintSet& constraints, Objective objective) {
  constraints.validate();
  LaserParams laser = fixed.laser_base;
  laser.power_W = power_W;
  const double sign = fixed.laser_base.detuning_Delta < 0 ? -1.0 : 1.0;
  laser.detuning_Delta = sign * detuning_mag;
  laser.waist_w0 = waist_w0;

  Evaluation ev;
  ev.power_W = power_W;
  ev.detuning = laser.detuning_Delta;
  ev.waist_w0 = waist_w0;
  ev.rates = compute_rates(laser, fixed.atoms, fixed.mech, fixed.conventions, fixed.gamma_at_cool);

  const DerivedQuantities d = derive_all(laser, fixed.atoms, fixed.mech, fixed.conventions);
  const double Omega = std::max(d.rabi_plus, d.rabi_minus);
  const double Gamma = fixed.atoms.gamma_spont;
  const double lambda = constants::two_pi / d.k_L;

  // Relative slacks: nonnegative iff the constraint holds, comparable
  // across constraints of different units.
  const double adiab_cap = detuning_mag / constraints.adiabatic_chi;
  const double sat_cap = constraints.saturation_s * (Gamma * Gamma + 4 * detuning_mag * detuning_mag) / 2.0;
  const double rwa_cap = fixed.mech.omega_m / constraints.rwa_margin_r;
  const double rayleigh = constants::pi * waist_w0 * waist_w0 / lambda;
  ev.slacks["adiabatic"] = (adiab_cap - Omega) / adiab_cap;
  ev.slacks["saturation"] = (sat_cap - Omega * Omega) / sat_cap;
  ev.slacks["rwa"] = (rwa_cap - ev.rates.g_eff) / rwa_cap;
  ev.slacks["rayleigh"] =
      constraints.ensemble_length_m > 0
          ? (rayleigh - constraints.ensemble_length_m) / constraints.ensemble_length_m
          : rayleigh;

  ev.feasible = true;
  for (const auto& [name, s] : ev.slacks)
    if (s < 0) ev.feasible = false;
  ev.objective_raw = objective_value(ev.rates, objective);
  return ev;
}

namespace {

double penalized(const Evaluation& ev) {
  if (ev.feasible) return ev.objective_raw;
  double worst = 0;
  for (const auto& [name, s] : ev.slacks) worst = std::min(worst, s);
  return -1e6 * (1.0 - worst);
}

}  // namespace

OptimizeResult optimize(const SearchSpec& spec, const FixedParams& fixed) {
  spec.bounds.validate();
  spec.constraints.validate();
  OptimizeResult res;

  auto eval_at = [&](double p, double dm, double w) {
    Evaluation ev = evaluate(p, dm, w, fixed, spec.constraints, spec.objective);
    res.audit.push_back(ev);
    return ev;
  };

  // Coarse scan: powers and detunings span decades, the waist does not.
  const int n = std::max(2, spec.grid_n);
  bool have_feasible = false;
  Evaluation best;
  std::string tightest = "adiabatic";
  double tightest_slack = -std::numeric_limits<double>::infinity();
  for (int ip = 0; ip < n; ++ip) {
    const double p = spec.bounds.power_W[0] *
                     std::pow(spec.bounds.power_W[1] / spec.bounds.power_W[0], double(ip) / (n - 1));
    for (int id = 0; id < n; ++id) {
      const double dm =
          spec.bounds.detuning_mag[0] *
          std::pow(spec.bounds.detuning_mag[1] / spec.bounds.detuning_mag[0], double(id) / (n - 1));
      for (int iw = 0; iw < n; ++iw) {
        const double w = spec.bounds.waist_w0[0] +
                         (spec.bounds.waist_w0[1] - spec.bounds.waist_w0[0]) * double(iw) / (n - 1);
        Evaluation ev = eval_at(p, dm, w);
        if (ev.feasible && (!have_feasible || ev.objective_raw > best.objective_raw)) {
          best = ev;
          have_feasible = true;
        }
        if (!have_feasible) {
          double min_slack = 0;
          std::string min_name;
          for (const auto& [name, s] : ev.slacks)
            if (s < min_slack) { min_slack = s; min_name = name; }
          if (min_slack > tightest_slack) {
            tightest_slack = min_slack;
            tightest = min_name;
          }
        }
      }
    }
  }
  if (!have_feasible) throw NoFeasiblePoint(tightest);

  // Nelder-Mead in (log P, log |Delta|, w0), clamped to bounds. The best
  // feasible point can only improve: every candidate lands in the audit
  // trail and `best` is monotone.
  using Coord = std::array<double, 3>;
  auto clamp = [&](Coord x) {
    x[0] = std::clamp(x[0], std::log(spec.bounds.power_W[0]), std::log(spec.bounds.power_W[1]));
    x[1] = std::clamp(x[1], std::log(spec.bounds.detuning_mag[0]),
                      std::log(spec.bounds.detuning_mag[1]));
    x[2] = std::clamp(x[2], spec.bounds.waist_w0[0], spec.bounds.waist_w0[1]);
    return x;
  };
  auto f = [&](const Coord& x) {
    Evaluation ev = eval_at(std::exp(x[0]), std::exp(x[1]), x[2]);
    if (ev.feasible && ev.objective_raw > best.objective_raw) best = ev;
    return -penalized(ev);  // minimize
  };

  Coord x0{std::log(best.power_W), std::log(std::abs(best.detuning)), best.waist_w0};
  const double wspan = spec.bounds.waist_w0[1] - spec.bounds.waist_w0[0];
  std::array<Coord, 4> simplex{x0, x0, x0, x0};
  simplex[1][0] += 0.15;
  simplex[2][1] += 0.15;
  simplex[3][2] += 0.05 * wspan;
  for (auto& v : simplex) v = clamp(v);
  std::array<double, 4> fv;
  for (int i = 0; i < 4; ++i) fv[i] = f(simplex[i]);

  for (int it = 0; it < spec.refine_iters; ++it) {
    std::array<int, 4> idx{0, 1, 2, 3};
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return fv[a] < fv[b]; });
    std::array<Coord, 4> sx;
    std::array<double, 4> sf;
    for (int i = 0; i < 4; ++i) {
      sx[i] = simplex[idx[i]];
      sf[i] = fv[idx[i]];
    }
    simplex = sx;
    fv = sf;
    if (std::abs(fv[3] - fv[0]) < 1e-12 * (std::abs(fv[0]) + 1e-12)) break;

    Coord centroid{0, 0, 0};
    for (int i = 0; i < 3; ++i)
      for (int k = 0; k < 3; ++k) centroid[k] += simplex[i][k] / 3.0;
    auto blend = [&](double t) {
      Coord x;
      for (int k = 0; k < 3; ++k) x[k] = centroid[k] + t * (simplex[3][k] - centroid[k]);
      return clamp(x);
    };
    const Coord xr = blend(-1.0);
    const double fr = f(xr);
    if (fr < fv[0]) {
      const Coord xe = blend(-2.0);
      const double fe = f(xe);
      if (fe < fr) { simplex[3] = xe; fv[3] = fe; }
      else { simplex[3] = xr; fv[3] = fr; }
    } else if (fr < fv[2]) {
      simplex[3] = xr;
      fv[3] = fr;
    } else {
      const Coord xc = blend(0.5);
      const double fc = f(xc);
      if (fc < fv[3]) { simplex[3] = xc; fv[3] = fc; }
      else {
        for (int i = 1; i < 4; ++i) {
          for (int k = 0; k < 3; ++k)
            simplex[i][k] = simplex[0][k] + 0.5 * (simplex[i][k] - simplex[0][k]);
          simplex[i] = clamp(simplex[i]);
          fv[i] = f(simplex[i]);
        }
      }
    }
  }

  res.best = best;
  return res;
}

FixedParams fixed_from_config(const SystemConfig& cfg) {
  FixedParams fx;
  fx.laser_base = cfg.laser;
  fx.atoms = cfg.atoms;
  fx.mech = cfg.mech;
  fx.conventions = cfg.conventions;
  fx.gamma_at_cool = cfg.gamma_at_cool;
  return fx;
}

}  // namespace spinmech::optimizer
