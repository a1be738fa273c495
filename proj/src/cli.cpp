#include "spinmech/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <iostream>
#include <sstream>

#include "spinmech/config.hpp"
#include "spinmech/constants.hpp"
#include "spinmech/gaussian.hpp"
#include "spinmech/io.hpp"
#include "spinmech/optimizer.hpp"
#include "spinmech/rates.hpp"
#include "spinmech/toml.hpp"
#include "spinmech/verify.hpp"

namespace spinmech::cli {

namespace {

using constants::to_2pi_hz;
using constants::two_pi;
using nlohmann::json;

std::string conv_string(const SystemConfig& cfg) {
  return io::conventions_string(cfg.conventions.rabi_halving,
                                cfg.conventions.area == AreaConvention::PiW0SquaredOverTwo);
}

// Frequencies default to Hz with explicit _2pi_hz key names; --radians
// switches the whole document to rad/s keys.
json rates_json(const RateSet& r, bool radians) {
  json out;
  auto put = [&](const std::string& name, double v) {
    if (radians) out[name + "_rad_s"] = v;
    else out[name + "_2pi_hz"] = to_2pi_hz(v);
  };
  put("g_eff", r.g_eff);
  put("gamma_m_diff", r.gamma_m_diff);
  put("gamma_at_diff", r.gamma_at_diff);
  put("gamma_m_th", r.gamma_m_th);
  put("gamma_at_cool", r.gamma_at_cool);
  put("gamma_m_tot", r.gamma_m_tot());
  put("gamma_at_tot", r.gamma_at_tot());
  put("omega_OL", r.omega_OL);
  out["g_m_sqrt_rad_s"] = r.g_m;
  out["g_at_sqrt_rad_s"] = r.g_at;
  out["coop_C0"] = r.coop_C0;
  out["coop_C"] = r.coop_C;
  out["detuning_sign"] = r.detuning_sign;
  return out;
}

void print_rates_text(const RateSet& r, std::ostream& os) {
  auto line = [&](const char* name, double v) {
    os << "  " << name << std::string(18 - std::min<size_t>(18, std::string(name).size()), ' ')
       << to_2pi_hz(v) << " Hz x 2pi   (" << v << " rad/s)\n";
  };
  os << "derived rates:\n";
  line("g_eff", r.g_eff);
  line("gamma_m_diff", r.gamma_m_diff);
  line("gamma_at_diff", r.gamma_at_diff);
  line("gamma_m_th", r.gamma_m_th);
  line("gamma_at_cool", r.gamma_at_cool);
  line("gamma_m_tot", r.gamma_m_tot());
  line("omega_OL", r.omega_OL);
  os << "  g_m               " << r.g_m << " sqrt(rad/s)\n";
  os << "  g_at              " << r.g_at << " sqrt(rad/s)\n";
  os << "  C0                " << r.coop_C0 << "\n";
  os << "  C                 " << r.coop_C << "\n";
}

std::vector<double> parse_list(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) out.push_back(std::stod(tok));
  }
  if (out.empty()) throw std::invalid_argument("empty list: " + csv);
  return out;
}

void write_json_artifact(const std::string& path, json doc, const io::RunManifest& m) {
  doc["manifest"] = m.to_json();
  io::atomic_write(path, doc.dump(2) + "\n");
}

void write_csv_artifact(const std::string& path, const std::string& csv,
                        const io::RunManifest& m) {
  io::atomic_write(path, csv);
  io::atomic_write(path + ".manifest.json", m.to_json().dump(2) + "\n");
}

double default_N_m(const SystemConfig& cfg, const RateSet& r) {
  const double gamma_m = cfg.mech.omega_m / cfg.mech.quality_Q;
  return r.gamma_m_th / gamma_m;
}

int cmd_rates(const std::string& config_path, const std::string& out_path, bool radians,
              bool report_conventions) {
  const SystemConfig cfg = load_config(config_path);
  const RateSet r = compute_rates(cfg);
  print_rates_text(r, std::cout);
  json doc = {{"rates", rates_json(r, radians)}};
  if (report_conventions) {
    doc["convention_report"] = verify::convention_report(cfg);
    std::cout << "convention report:\n" << doc["convention_report"].dump(2) << "\n";
  }
  if (!out_path.empty())
    write_json_artifact(out_path, doc, io::make_manifest(config_path, "rates", conv_string(cfg)));
  return 0;
}

int cmd_steady_state(const std::string& config_path, double cool, const std::string& out_path,
                     bool radians) {
  SystemConfig cfg = load_config(config_path);
  if (cool >= 0) cfg.gamma_at_cool = cool;
  const RateSet r = compute_rates(cfg);
  const double N_m = default_N_m(cfg, r);
  HamiltonianChoice h{HamiltonianVariant::FullQuadrature, cfg.mech.omega_m, 0.0};
  json doc = {{"rates", rates_json(r, radians)}, {"N_m", N_m}};
  try {
    const MomentState ss = steady_state(build_model(h, r, N_m));
    doc["n_mech"] = occupation(ss, Mode::Mechanics);
    doc["n_spin"] = occupation(ss, Mode::Spin);
    doc["stable"] = true;
    std::cout << "steady state: n_mech = " << doc["n_mech"].get<double>()
              << ", n_spin = " << doc["n_spin"].get<double>() << "\n";
  } catch (const UnstableModel& e) {
    doc["stable"] = false;
    doc["spectral_abscissa"] = e.abscissa;
    std::cout << "steady state: unstable (abscissa " << e.abscissa << ")\n";
  }
  if (!out_path.empty())
    write_json_artifact(out_path, doc,
                        io::make_manifest(config_path, "steady-state", conv_string(cfg)));
  return 0;
}

int cmd_cool_curve(const std::string& config_path, const std::string& cool_csv,
                   const std::string& geff_csv, int geff_points, const std::string& out_path) {
  const SystemConfig cfg = load_config(config_path);
  const RateSet base = compute_rates(cfg);
  const double N_m = default_N_m(cfg, base);
  const std::vector<double> cools = parse_list(cool_csv);
  std::vector<double> geffs;
  if (!geff_csv.empty()) {
    geffs = parse_list(geff_csv);
  } else {
    // default grid up to just past the stability cutoff
    const double gmax = 1.2 * cfg.mech.omega_m;
    for (int i = 1; i <= geff_points; ++i) geffs.push_back(gmax * double(i) / geff_points);
  }
  HamiltonianChoice h{HamiltonianVariant::FullQuadrature, cfg.mech.omega_m, 0.0};
  const auto table = cooling_curve(base, h, geffs, cools, N_m);

  std::ostringstream csv;
  csv << "g_eff_Hz,gamma_cool_Hz,n_ss,stable\n";
  for (const auto& pt : table) {
    csv << to_2pi_hz(pt.g_eff) << "," << to_2pi_hz(pt.gamma_cool) << ",";
    if (pt.stable) csv << pt.n_ss;
    else csv << "nan";
    csv << "," << (pt.stable ? 1 : 0) << "\n";
  }
  if (out_path.empty()) {
    std::cout << csv.str();
  } else {
    write_csv_artifact(out_path, csv.str(),
                       io::make_manifest(config_path, "cool-curve", conv_string(cfg)));
    std::cout << "wrote " << out_path << " (" << table.size() << " points)\n";
  }
  return 0;
}

int cmd_sweep(const std::string& config_path, double gmin, double gmax, int points,
              const std::string& out_path) {
  const SystemConfig cfg = load_config(config_path);
  const RateSet base = compute_rates(cfg);
  std::ostringstream csv;
  csv << "g_eff_Hz,ratio_geff_gamma_m_tot,ratio_geff_gamma_at_diff,coop_C0\n";
  for (int i = 0; i < points; ++i) {
    const double g = gmin + (gmax - gmin) * double(i) / std::max(1, points - 1);
    csv << to_2pi_hz(g) << "," << g / base.gamma_m_tot() << "," << g / base.gamma_at_diff << ","
        << cooperativity(g, base.gamma_m_tot(), base.gamma_at_diff) << "\n";
  }
  if (out_path.empty()) {
    std::cout << csv.str();
  } else {
    write_csv_artifact(out_path, csv.str(),
                       io::make_manifest(config_path, "sweep", conv_string(cfg)));
    std::cout << "wrote " << out_path << "\n";
  }
  return 0;
}

int cmd_optimize(const std::string& config_path, const std::string& objective,
                 optimizer::SearchSpec spec, const std::string& out_path,
                 const std::string& audit_path) {
  const SystemConfig cfg = load_config(config_path);
  if (objective == "c0") spec.objective = optimizer::Objective::MaxC0;
  else if (objective == "minratio") spec.objective = optimizer::Objective::MaxMinRatio;
  else throw CLI::ValidationError("--objective must be c0 or minratio");
  spec.constraints.ensemble_length_m = cfg.geometry.ensemble_length_m;

  const optimizer::FixedParams fixed = optimizer::fixed_from_config(cfg);
  const optimizer::OptimizeResult res = optimizer::optimize(spec, fixed);

  json doc = {{"best",
               {{"power_W", res.best.power_W},
                {"detuning_2pi_hz", to_2pi_hz(res.best.detuning)},
                {"waist_w0", res.best.waist_w0},
                {"objective", res.best.objective_raw},
                {"feasible", res.best.feasible},
                {"slacks", res.best.slacks},
                {"rates", rates_json(res.best.rates, false)}}},
              {"evaluations", res.audit.size()},
              {"constraints",
               {{"adiabatic_chi", spec.constraints.adiabatic_chi},
                {"saturation_s", spec.constraints.saturation_s},
                {"rwa_margin_r", spec.constraints.rwa_margin_r},
                {"ensemble_length_m", spec.constraints.ensemble_length_m}}}};
  std::cout << "optimum: P = " << res.best.power_W
            << " W, Delta/2pi = " << to_2pi_hz(res.best.detuning)
            << " Hz, w0 = " << res.best.waist_w0 << " m, objective = " << res.best.objective_raw
            << "\n";
  const io::RunManifest m = io::make_manifest(config_path, "optimize", conv_string(cfg));
  if (!out_path.empty()) write_json_artifact(out_path, doc, m);
  if (!audit_path.empty()) {
    std::ostringstream csv;
    csv << "power_W,detuning_Hz,waist_w0,objective,feasible\n";
    for (const auto& ev : res.audit)
      csv << ev.power_W << "," << to_2pi_hz(ev.detuning) << "," << ev.waist_w0 << ","
          << ev.objective_raw << "," << (ev.feasible ? 1 : 0) << "\n";
    write_csv_artifact(audit_path, csv.str(), m);
  }
  return 0;
}

int cmd_verify_gaussian(double tolerance, const std::string& out_path) {
  const auto rows = verify::run_oracle_battery(tolerance);
  bool all_pass = true;
  std::cout << "point              n_gauss     n_fock      rel_err    pass\n";
  for (const auto& c : rows) {
    all_pass = all_pass && c.pass;
    std::printf("%-18s %-11.6f %-11.6f %-10.2e %s\n", c.point.name.c_str(), c.n_gauss, c.n_fock,
                c.rel_err, c.pass ? "yes" : "NO");
  }
  if (!out_path.empty()) {
    json doc = {{"tolerance", tolerance}, {"comparisons", verify::oracle_battery_json(rows)},
                {"pass", all_pass}};
    write_json_artifact(out_path, doc, io::make_manifest("", "verify-gaussian", ""));
  }
  std::cout << (all_pass ? "verify-gaussian: PASS\n" : "verify-gaussian: FAIL\n");
  return all_pass ? 0 : 2;
}

int cmd_verify_elimination(const std::string& phase, double dt, int bins,
                           const std::string& out_path) {
  collision::CascadeConfig cfg = verify::default_elimination_config(phase == "on");
  if (dt > 0) cfg.dt_bin = dt;
  if (bins > 0) cfg.n_bins = bins;
  const verify::EliminationCheck chk = verify::check_elimination(cfg);
  const json doc = verify::elimination_json(chk);
  std::cout << doc.dump(2) << "\n";
  if (!out_path.empty())
    write_json_artifact(out_path, doc, io::make_manifest("", "verify-elimination", ""));
  std::cout << (chk.pass ? "verify-elimination: PASS\n" : "verify-elimination: FAIL\n");
  return chk.pass ? 0 : 2;
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"spinmech: light-mediated coupling of a mechanical oscillator to an atomic "
               "spin wave - rates, steady states, cooling curves and cross-solver verification"};
  app.require_subcommand(1);

  std::string config_path, out_path, audit_path;
  bool radians = false;

  auto* rates_cmd = app.add_subcommand("rates", "print the derived rate set for a config");
  rates_cmd->add_option("--config", config_path, "TOML config file")->required();
  rates_cmd->add_option("--out", out_path, "write JSON artifact");
  rates_cmd->add_flag("--radians", radians, "emit rad/s keys instead of *_2pi_hz");
  bool report_conventions = false;
  rates_cmd->add_flag("--report-conventions", report_conventions,
                      "emit the convention discrepancy report");

  auto* ss_cmd = app.add_subcommand("steady-state", "two-mode Gaussian steady state");
  ss_cmd->add_option("--config", config_path, "TOML config file")->required();
  double cool = -1;
  ss_cmd->add_option("--cool", cool, "external repump rate (rad/s), overrides config");
  ss_cmd->add_option("--out", out_path, "write JSON artifact");
  ss_cmd->add_flag("--radians", radians, "emit rad/s keys");

  auto* cool_cmd = app.add_subcommand("cool-curve", "steady-state occupation vs g_eff");
  cool_cmd->add_option("--config", config_path, "TOML config file")->required();
  std::string cool_csv = "0";
  cool_cmd->add_option("--cool", cool_csv, "comma list of repump rates (rad/s)");
  std::string geff_csv;
  cool_cmd->add_option("--geff", geff_csv, "comma list of g_eff values (rad/s)");
  int geff_points = 60;
  cool_cmd->add_option("--points", geff_points, "grid size when --geff is not given");
  cool_cmd->add_option("--out", out_path, "write CSV artifact (with manifest sidecar)");

  auto* sweep_cmd = app.add_subcommand("sweep", "strong-coupling ratios and C0 vs g_eff");
  sweep_cmd->add_option("--config", config_path, "TOML config file")->required();
  double gmin = 0, gmax = 0;
  int sweep_points = 50;
  sweep_cmd->add_option("--geff-min", gmin, "smallest g_eff (rad/s)")->required();
  sweep_cmd->add_option("--geff-max", gmax, "largest g_eff (rad/s)")->required();
  sweep_cmd->add_option("--points", sweep_points, "grid size");
  sweep_cmd->add_option("--out", out_path, "write CSV artifact");

  auto* opt_cmd = app.add_subcommand("optimize", "constrained search over (P, Delta, w0)");
  opt_cmd->add_option("--config", config_path, "TOML config file")->required();
  std::string objective = "minratio";
  opt_cmd->add_option("--objective", objective, "c0 | minratio");
  optimizer::SearchSpec spec;
  spec.bounds.power_W = {1e-9, 1e-2};
  spec.bounds.detuning_mag = {constants::from_2pi_hz(1e6), constants::from_2pi_hz(20e9)};
  spec.bounds.waist_w0 = {20e-6, 150e-6};
  opt_cmd->add_option("--p-min", spec.bounds.power_W[0], "lower power bound (W)");
  opt_cmd->add_option("--p-max", spec.bounds.power_W[1], "upper power bound (W)");
  opt_cmd->add_option("--delta-min", spec.bounds.detuning_mag[0], "lower |Delta| bound (rad/s)");
  opt_cmd->add_option("--delta-max", spec.bounds.detuning_mag[1], "upper |Delta| bound (rad/s)");
  opt_cmd->add_option("--w0-min", spec.bounds.waist_w0[0], "lower waist bound (m)");
  opt_cmd->add_option("--w0-max", spec.bounds.waist_w0[1], "upper waist bound (m)");
  opt_cmd->add_option("--chi", spec.constraints.adiabatic_chi, "adiabatic margin chi");
  opt_cmd->add_option("--sat", spec.constraints.saturation_s, "saturation cap s");
  opt_cmd->add_option("--rwa", spec.constraints.rwa_margin_r, "rwa margin r");
  opt_cmd->add_option("--grid", spec.grid_n, "coarse grid points per axis");
  opt_cmd->add_option("--out", out_path, "write JSON artifact");
  opt_cmd->add_option("--audit", audit_path, "write audit trail CSV");

  auto* vg_cmd = app.add_subcommand("verify-gaussian", "Gaussian engine vs Fock oracle");
  double tolerance = 0.01;
  vg_cmd->add_option("--tolerance", tolerance, "relative tolerance on n_ss");
  vg_cmd->add_option("--out", out_path, "write JSON artifact");

  auto* ve_cmd = app.add_subcommand("verify-elimination", "collision-model elimination check");
  std::string phase = "on";
  ve_cmd->add_option("--phase-shift", phase, "on | off")->check(CLI::IsMember({"on", "off"}));
  double dt = -1;
  int bins = -1;
  ve_cmd->add_option("--dt", dt, "bin duration override");
  ve_cmd->add_option("--bins", bins, "bin count override");
  ve_cmd->add_option("--out", out_path, "write JSON artifact");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help
      std::cout << app.help();
      return 0;
    }
    std::cerr << e.what() << "\n" << app.help();
    return 1;
  }

  try {
    if (rates_cmd->parsed())
      return cmd_rates(config_path, out_path, radians, report_conventions);
    if (ss_cmd->parsed()) return cmd_steady_state(config_path, cool, out_path, radians);
    if (cool_cmd->parsed())
      return cmd_cool_curve(config_path, cool_csv, geff_csv, geff_points, out_path);
    if (sweep_cmd->parsed()) return cmd_sweep(config_path, gmin, gmax, sweep_points, out_path);
    if (opt_cmd->parsed()) return cmd_optimize(config_path, objective, spec, out_path, audit_path);
    if (vg_cmd->parsed()) return cmd_verify_gaussian(tolerance, out_path);
    if (ve_cmd->parsed()) return cmd_verify_elimination(phase, dt, bins, out_path);
  } catch (const toml::ParseError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

int run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args);
}

}  // namespace spinmech::cli
