#include "spinmech/verify.hpp"

#include <cmath>

#include "spinmech/constants.hpp"
#include "spinmech/gaussian.hpp"
#include "spinmech/io.hpp"
#include "spinmech/rates.hpp"

namespace spinmech::verify {

std::vector<OraclePoint> default_oracle_points() {
  // name, om, delta, g, gamma_m, N_m, gamma_m_diff, gamma_at_diff, rwa, dm, ds
  return {
      {"hybridized", 1.0, 0.00, 0.25, 0.20, 0.5, 0.054, 0.50, false, 12, 5},
      {"warm-bath", 1.0, 0.00, 0.15, 0.10, 1.0, 0.030, 0.40, false, 12, 5},
      {"hot-weak-coupling", 1.0, 0.00, 0.10, 0.05, 1.2, 0.020, 0.60, false, 15, 4},
      {"off-resonant", 1.0, 0.08, 0.20, 0.15, 0.6, 0.040, 0.50, false, 12, 5},
      {"beamsplitter", 1.0, 0.00, 0.08, 0.05, 0.8, 0.000, 0.30, true, 10, 5},
      {"strong-coupling", 1.0, 0.00, 0.30, 0.25, 0.4, 0.080, 0.70, false, 12, 5},
  };
}

namespace {

RateSet rates_of(const OraclePoint& p) {
  RateSet r;
  r.g_eff = p.g_eff;
  r.gamma_m_diff = p.gamma_m_diff;
  r.gamma_at_diff = p.gamma_at_diff;
  r.gamma_at_cool = 0;
  r.gamma_m_th = p.gamma_m * p.N_m;
  return r;
}

HamiltonianChoice choice_of(const OraclePoint& p) {
  HamiltonianChoice h;
  h.variant = p.rwa ? HamiltonianVariant::BeamsplitterRWA : HamiltonianVariant::FullQuadrature;
  h.omega_m = p.omega_m;
  h.delta_resonance = p.delta_resonance;
  return h;
}

}  // namespace

OracleComparison compare_point(const OraclePoint& p, double tolerance) {
  OracleComparison c;
  c.point = p;
  const RateSet r = rates_of(p);
  const HamiltonianChoice h = choice_of(p);

  const GaussianModel model = build_model(h, r, p.N_m);
  const MomentState ss = steady_state(model);
  c.n_gauss = occupation(ss, Mode::Mechanics);
  c.lyapunov_residual = lyapunov_residual(model, ss);

  const fock::TruncatedSpace space{p.dim_mech, p.dim_spin, 4096};
  const fock::CMat L = fock::build_liouvillian(space, h, r, p.N_m);
  const fock::SteadyStateResult fss = fock::steady_state_nullspace(L, space);
  const fock::Operators ops = fock::make_operators(space);
  c.n_fock = fock::occupation_fock(fss.rho, ops, Mode::Mechanics);
  c.fock_residual = fss.residual;
  c.boundary_mech = fss.boundary_mech;
  c.boundary_spin = fss.boundary_spin;

  c.rel_err = std::abs(c.n_fock - c.n_gauss) / std::abs(c.n_fock);
  c.pass = c.rel_err <= tolerance && c.lyapunov_residual <= 1e-10;
  return c;
}

std::vector<OracleComparison> run_oracle_battery(double tolerance) {
  std::vector<OracleComparison> out;
  for (const OraclePoint& p : default_oracle_points()) out.push_back(compare_point(p, tolerance));
  return out;
}

EliminationCheck check_elimination(const collision::CascadeConfig& cfg, double coupling_tol,
                                   double backaction_tol) {
  EliminationCheck chk;
  chk.config = cfg;
  chk.estimate = collision::extract_generator(cfg);
  chk.target = collision::targets(cfg);

  chk.coupling_rel_err = std::abs(chk.estimate.coupling_coeff() - chk.target.coupling_coeff) /
                         std::abs(chk.target.coupling_coeff);
  chk.gamma_m_diff_rel_err =
      std::abs(chk.estimate.dissipator_rates.at("X_m") - chk.target.gamma_m_diff) /
      chk.target.gamma_m_diff;
  const double ba = chk.estimate.backaction_coeff(cfg.omega_spin);
  const double ba_scale = cfg.g_at_sqrtN * cfg.g_at_sqrtN;
  if (cfg.phase_shift_enabled) {
    chk.backaction_rel_err = std::abs(ba) / ba_scale;  // leakage fraction of the removed term
    chk.pass = chk.coupling_rel_err <= coupling_tol && chk.gamma_m_diff_rel_err <= coupling_tol &&
               chk.backaction_rel_err <= 0.05;
  } else {
    chk.backaction_rel_err = std::abs(ba - chk.target.backaction) / ba_scale;
    chk.pass = chk.coupling_rel_err <= coupling_tol && chk.gamma_m_diff_rel_err <= coupling_tol &&
               chk.backaction_rel_err <= backaction_tol;
  }
  return chk;
}

collision::CascadeConfig default_elimination_config(bool phase_shift_on) {
  collision::CascadeConfig cfg;
  cfg.phase_shift_enabled = phase_shift_on;
  cfg.dt_bin = 0.02;
  cfg.n_bins = 450;
  cfg.snapshot_stride = 5;
  if (phase_shift_on) {
    cfg.dim_mech = 12;
    cfg.dim_spin = 6;
    cfg.g_m = 0.3;
    cfg.g_at_sqrtN = 0.3;
    cfg.omega_m = 0.5;
    cfg.omega_spin = 0.5;
  } else {
    cfg.dim_mech = 10;
    cfg.dim_spin = 8;
    cfg.g_m = 0.1;
    cfg.g_at_sqrtN = 0.4;
    cfg.omega_m = 0.0;
    cfg.omega_spin = 0.0;
  }
  return cfg;
}

nlohmann::json convention_report(const SystemConfig& zipper) {
  using constants::to_2pi_hz;
  nlohmann::json rows = nlohmann::json::array();
  for (bool area_half : {false, true}) {
    for (bool halving : {false, true}) {
      SystemConfig c = zipper;
      c.conventions.area =
          area_half ? AreaConvention::PiW0SquaredOverTwo : AreaConvention::PiW0Squared;
      c.conventions.rabi_halving = halving;
      const RateSet r = compute_rates(c);
      rows.push_back(
          {{"conventions", io::conventions_string(halving, area_half)},
           {"gamma_at_diff_2pi_hz", to_2pi_hz(r.gamma_at_diff)},
           {"gamma_at_diff_vs_reference", r.gamma_at_diff / reference::zipper_gamma_at_diff},
           {"g_eff_2pi_hz", to_2pi_hz(r.g_eff)},
           {"g_eff_vs_reference", r.g_eff / reference::zipper_g_eff},
           {"gamma_m_diff_2pi_hz", to_2pi_hz(r.gamma_m_diff)},
           {"gamma_m_diff_vs_reference", r.gamma_m_diff / reference::zipper_gamma_m_diff},
           {"gamma_m_th_2pi_hz", to_2pi_hz(r.gamma_m_th)},
           {"gamma_m_th_vs_reference", r.gamma_m_th / reference::zipper_gamma_m_th}});
    }
  }
  // The alternately quoted figures equal the reference rates expressed in
  // rad/s: each ratio against the rad/s reference value is ~ 1.
  nlohmann::json alt = {
      {"g_eff_ratio", reference::zipper_alt_g_eff / reference::zipper_g_eff},
      {"gamma_at_diff_ratio",
       reference::zipper_alt_gamma_at_diff / reference::zipper_gamma_at_diff},
      {"gamma_m_diff_ratio",
       reference::zipper_alt_gamma_m_diff / reference::zipper_gamma_m_diff},
      {"gamma_m_th_ratio", reference::zipper_alt_gamma_m_th / reference::zipper_gamma_m_th},
      {"note", "alternate figures / reference rates (rad/s) ~ 1: the two quotes are the same "
               "numbers in rad/s vs Hz/2pi"}};

  return {{"rows", rows},
          {"alternate_unit_relation", alt},
          {"resolved_convention", "area=pi_w0_squared, rabi_halving=true reproduces the "
                                  "reference atomic scattering rate; the residual in g_eff "
                                  "(~1.23x under that pair) is systematic and documented here"}};
}

nlohmann::json oracle_battery_json(const std::vector<OracleComparison>& rows) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& c : rows) {
    out.push_back({{"point", c.point.name},
                   {"n_ss_gauss", c.n_gauss},
                   {"n_ss_fock", c.n_fock},
                   {"rel_err", c.rel_err},
                   {"lyapunov_residual", c.lyapunov_residual},
                   {"fock_residual", c.fock_residual},
                   {"boundary_mech", c.boundary_mech},
                   {"boundary_spin", c.boundary_spin},
                   {"pass", c.pass}});
  }
  return out;
}

nlohmann::json elimination_json(const EliminationCheck& chk) {
  return {{"phase_shift", chk.config.phase_shift_enabled ? "on" : "off"},
          {"dt_bin", chk.config.dt_bin},
          {"n_bins", chk.config.n_bins},
          {"fitted",
           {{"coupling_coeff", chk.estimate.coupling_coeff()},
            {"gamma_m_diff", chk.estimate.dissipator_rates.at("X_m")},
            {"backaction_coeff", chk.estimate.backaction_coeff(chk.config.omega_spin)},
            {"fit_residual", chk.estimate.fit_residual}}},
          {"targets",
           {{"coupling_coeff", chk.target.coupling_coeff},
            {"gamma_m_diff", chk.target.gamma_m_diff},
            {"backaction_coeff", chk.target.backaction}}},
          {"rel_errors",
           {{"coupling", chk.coupling_rel_err},
            {"gamma_m_diff", chk.gamma_m_diff_rel_err},
            {"backaction", chk.backaction_rel_err}}},
          {"pass", chk.pass}};
}

}  // namespace spinmech::verify
