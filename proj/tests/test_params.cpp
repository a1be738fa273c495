#include <doctest.h>

#include <cmath>
#include <cstdio>

#include "spinmech/config.hpp"
#include "spinmech/constants.hpp"
#include "spinmech/params.hpp"
#include "spinmech/toml.hpp"

using namespace spinmech;
using constants::from_2pi_hz;

namespace {

LaserParams zipper_laser() {
  return {2.5e-7, from_2pi_hz(378e12), from_2pi_hz(15e6), 30e-6};
}
AtomParams zipper_atoms() {
  return {2.54e-29, 2.54e-29, from_2pi_hz(5.75e6), from_2pi_hz(10e6), 3e15};
}
MechParams zipper_mech() {
  MechParams m;
  m.variant = MechVariant::OptomechCavity;
  m.omega_m = from_2pi_hz(10e6);
  m.mass_M = 4e-14;
  m.quality_Q = 1e5;
  m.bath_T0 = 4.0;
  m.heating_dT_per_W = 12e3;
  m.g0 = from_2pi_hz(1.83e6);
  m.kappa = from_2pi_hz(4e9);
  return m;
}

void write_file(const std::string& path, const std::string& content) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  REQUIRE(f != nullptr);
  std::fwrite(content.data(), 1, content.size(), f);
  std::fclose(f);
}

}  // namespace

TEST_CASE("photon flux from power") {
  LaserParams l = zipper_laser();

  SUBCASE("zero power gives zero flux") {
    l.power_W = 0;
    CHECK(alpha_sq_from_power(l) == 0.0);
  }
  SUBCASE("flux is linear in power") {
    const double a1 = alpha_sq_from_power(l);
    l.power_W *= 2;
    CHECK(alpha_sq_from_power(l) == doctest::Approx(2 * a1).epsilon(1e-15));
  }
  SUBCASE("independent arithmetic") {
    // 2 pi P / (hbar omega_L) evaluated by hand for the zipper drive.
    CHECK(alpha_sq_from_power(l) == doctest::Approx(6.2715089737e12).epsilon(1e-9));
    CHECK(alpha_sq_from_power(l) == doctest::Approx(6.3e12).epsilon(0.01));
  }
}

TEST_CASE("mode amplitude") {
  LaserParams l = zipper_laser();

  SUBCASE("doubling the waist halves the amplitude") {
    const double e1 = field_amplitude(l, AreaConvention::PiW0Squared);
    l.waist_w0 *= 2;
    CHECK(field_amplitude(l, AreaConvention::PiW0Squared) ==
          doctest::Approx(e1 / 2).epsilon(1e-14));
  }
  SUBCASE("quadrupling the frequency doubles the amplitude") {
    const double e1 = field_amplitude(l, AreaConvention::PiW0Squared);
    l.omega_L *= 4;
    CHECK(field_amplitude(l, AreaConvention::PiW0Squared) ==
          doctest::Approx(2 * e1).epsilon(1e-14));
  }
  SUBCASE("zipper values under both area conventions") {
    CHECK(field_amplitude(l, AreaConvention::PiW0Squared) ==
          doctest::Approx(1.0306662873e-4).epsilon(1e-9));
    CHECK(field_amplitude(l, AreaConvention::PiW0SquaredOverTwo) ==
          doctest::Approx(1.4575822418e-4).epsilon(1e-9));
  }
  SUBCASE("nonpositive waist is rejected") {
    l.waist_w0 = 0;
    CHECK_THROWS_AS(field_amplitude(l, AreaConvention::PiW0Squared), std::invalid_argument);
  }
}

TEST_CASE("derive_all") {
  const LaserParams l = zipper_laser();
  const AtomParams a = zipper_atoms();
  const MechParams m = zipper_mech();

  SUBCASE("zero-point length and atom number") {
    const DerivedQuantities d = derive_all(l, a, m);
    CHECK(d.ell_m == doctest::Approx(4.5803973288e-15).epsilon(1e-9));
    CHECK(d.ell_m == doctest::Approx(4.6e-15).epsilon(0.01));
    CHECK(d.atom_number_N == doctest::Approx(8.4823001647e6).epsilon(1e-9));
    CHECK(d.atom_number_N == doctest::Approx(8.5e6).epsilon(0.005));
    CHECK(d.k_L == doctest::Approx(7.9222941830e6).epsilon(1e-9));
  }
  SUBCASE("Rabi frequencies under both conventions") {
    Conventions conv;
    DerivedQuantities d = derive_all(l, a, m, conv);
    CHECK(d.rabi_minus == doctest::Approx(6.2167249134e7).epsilon(1e-9));
    conv.rabi_halving = true;
    d = derive_all(l, a, m, conv);
    CHECK(d.rabi_minus == doctest::Approx(3.1083624567e7).epsilon(1e-9));
    CHECK(d.rabi_plus == d.rabi_minus);  // equal dipole elements
  }
  SUBCASE("zero density flags a warning") {
    AtomParams a0 = a;
    a0.area_density_rhoA = 0;
    const DerivedQuantities d = derive_all(l, a0, m);
    CHECK(d.atom_number_N == 0.0);
    REQUIRE(!d.warnings.empty());
  }
  SUBCASE("pure function: identical inputs, bit-identical outputs") {
    const DerivedQuantities d1 = derive_all(l, a, m);
    const DerivedQuantities d2 = derive_all(l, a, m);
    CHECK(d1.alpha_sq == d2.alpha_sq);
    CHECK(d1.field_amp_E == d2.field_amp_E);
    CHECK(d1.rabi_minus == d2.rabi_minus);
    CHECK(d1.ell_m == d2.ell_m);
    CHECK(d1.atom_number_N == d2.atom_number_N);
  }
  SUBCASE("invalid fields are rejected with a field name") {
    LaserParams bad = l;
    bad.waist_w0 = -1;
    CHECK_THROWS_WITH_AS(derive_all(bad, a, m), doctest::Contains("waist_w0"),
                         std::invalid_argument);
    MechParams badm = m;
    badm.quality_Q = 0;
    CHECK_THROWS_WITH_AS(derive_all(l, a, badm), doctest::Contains("quality_Q"),
                         std::invalid_argument);
  }
}

TEST_CASE("derived-quantity scaling properties") {
  const LaserParams l = zipper_laser();
  const AtomParams a = zipper_atoms();

  SUBCASE("ell_m strictly decreases in mass and frequency") {
    double prev = zero_point_length(1e-15, 1e6);
    for (double M = 2e-15; M < 1e-10; M *= 3.7) {
      const double cur = zero_point_length(M, 1e6);
      CHECK(cur < prev);
      prev = cur;
    }
    prev = zero_point_length(1e-14, 1e5);
    for (double om = 3e5; om < 1e10; om *= 4.1) {
      const double cur = zero_point_length(1e-14, om);
      CHECK(cur < prev);
      prev = cur;
    }
  }
  SUBCASE("N is exactly linear in density and quadratic in waist") {
    const MechParams m = zipper_mech();
    const DerivedQuantities d0 = derive_all(l, a, m);
    AtomParams a2 = a;
    a2.area_density_rhoA *= 2;
    CHECK(derive_all(l, a2, m).atom_number_N == 2 * d0.atom_number_N);
    LaserParams l2 = l;
    l2.waist_w0 *= 2;
    CHECK(derive_all(l2, a, m).atom_number_N == 4 * d0.atom_number_N);
  }
}

TEST_CASE("toml subset parser") {
  SUBCASE("values and comments") {
    const auto t = toml::parse("# header\n[sec]\nx = 1.5e3 # trailing\nflag = true\n"
                               "name = \"abc # not a comment\"\nn = 42\n");
    CHECK(t.get_number("sec", "x") == 1500.0);
    CHECK(t.get_bool_or("sec", "flag", false));
    CHECK(t.get_string("sec", "name") == "abc # not a comment");
    CHECK(t.get_number("sec", "n") == 42.0);
  }
  SUBCASE("errors carry line numbers") {
    CHECK_THROWS_WITH_AS(toml::parse("[sec\nx=1\n"), doctest::Contains("line 1"),
                         toml::ParseError);
    CHECK_THROWS_WITH_AS(toml::parse("[s]\nbroken line\n"), doctest::Contains("line 2"),
                         toml::ParseError);
    CHECK_THROWS_AS(toml::parse("[s]\nx = nonsense\n"), toml::ParseError);
  }
  SUBCASE("missing keys are reported by section and name") {
    const auto t = toml::parse("[laser]\npower_W = 1e-6\n");
    CHECK_THROWS_WITH_AS(t.get_number("laser", "waist_w0"), doctest::Contains("waist_w0"),
                         toml::ParseError);
  }
}

TEST_CASE("config loading") {
  const std::string base =
      "[laser]\npower_W = 2.5e-7\nomega_L_2pi_hz = 378e12\ndetuning_Delta_2pi_hz = 15e6\n"
      "waist_w0 = 30e-6\n"
      "[atoms]\ndipole_mu_plus = 2.54e-29\ndipole_mu_minus = 2.54e-29\n"
      "gamma_spont_2pi_hz = 5.75e6\nomega_at_2pi_hz = 10e6\narea_density_rhoA = 3e15\n"
      "[mechanics]\nvariant = \"optomech_cavity\"\nomega_m_2pi_hz = 10e6\nmass_M = 4e-14\n"
      "quality_Q = 1e5\nbath_T0 = 4.0\nheating_dT_per_W = 12e3\ng0_2pi_hz = 1.83e6\n"
      "kappa_2pi_hz = 4e9\n"
      "[conventions]\narea = \"pi_w0_squared\"\nrabi_halving = true\n";

  SUBCASE("2pi-Hz fields are converted to rad/s") {
    const std::string path = "/tmp/spinmech_test_cfg.toml";
    write_file(path, base);
    const SystemConfig cfg = load_config(path);
    CHECK(cfg.laser.omega_L == doctest::Approx(from_2pi_hz(378e12)));
    CHECK(cfg.mech.kappa == doctest::Approx(from_2pi_hz(4e9)));
    CHECK(cfg.conventions.rabi_halving);
    CHECK(cfg.geometry.ensemble_length_m == 0.01);  // default
  }
  SUBCASE("plain rad/s fields work too") {
    std::string alt = base;
    const std::string find = "detuning_Delta_2pi_hz = 15e6";
    alt.replace(alt.find(find), find.size(), "detuning_Delta = 9.42477796e7");
    const std::string path = "/tmp/spinmech_test_cfg_alt.toml";
    write_file(path, alt);
    const SystemConfig cfg = load_config(path);
    CHECK(cfg.laser.detuning_Delta == doctest::Approx(from_2pi_hz(15e6)).epsilon(1e-8));
  }
  SUBCASE("giving both unit forms of one field is an error") {
    std::string bad = base + "[extra_ignored_section]\nz = 1\n";
    const std::string find = "omega_L_2pi_hz = 378e12";
    bad.replace(bad.find(find), find.size(), "omega_L_2pi_hz = 378e12\nomega_L = 1.0");
    const std::string path = "/tmp/spinmech_test_cfg_bad.toml";
    write_file(path, bad);
    CHECK_THROWS_WITH_AS(load_config(path), doctest::Contains("only one"), toml::ParseError);
  }
  SUBCASE("unknown variant is rejected") {
    std::string bad = base;
    const std::string find = "variant = \"optomech_cavity\"";
    bad.replace(bad.find(find), find.size(), "variant = \"bogus\"");
    const std::string path = "/tmp/spinmech_test_cfg_bad2.toml";
    write_file(path, bad);
    CHECK_THROWS_AS(load_config(path), toml::ParseError);
  }
}
