#include <doctest.h>

#include "approx.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

#include "rdc/errors.hpp"
#include "rdc/noise.hpp"
#include "rdc/oscillator.hpp"
#include "rdc/profiles.hpp"

using namespace rdc;

namespace {

std::string data_path(const std::string& name) {
  const char* dir = std::getenv("RDC_TEST_DATA");
  return std::string(dir ? dir : "tests/data") + "/" + name;
}

const char* kMinimal = R"(name = tiny
technology.node_m = 0.35e-6
supply.vdd_v = 2
oscillator.f_o_hz = 80e6
power.active_w = 1e-3
phase_noise.offset_hz = 1e6
phase_noise.l_dbc = -120
jitter.k = 1e-6
readout.t_meas_s = 10e-3
readout.period_s = 1
sensor.r_min_ohm = 100
sensor.r_max_ohm = 20e3
)";

}  // namespace

TEST_CASE("builtin profiles carry the published operating points") {
  const auto all = builtin_profiles();
  REQUIRE(all.size() == 3);
  CHECK(all[0].name == "d1");
  CHECK(all[0].f_o_hz == 83.2e6);
  CHECK(all[0].active_power_w == 86.1e-6);
  CHECK(all[0].jitter_slope == 1.88e-6);
  CHECK(all[1].jitter_slope == 3.67e-7);
  CHECK(all[1].active_power_w == 1.92e-3);
  CHECK(all[2].f_o_hz == 61.3e6);
  CHECK(all[2].t_meas_s == 30e-3);
  CHECK(all[2].widlar.regime == ChannelRegime::short_channel);
  for (const auto& p : all) {
    CHECK_NOTHROW(validate(p));
    REQUIRE(p.reference.has_value());
    CHECK(p.counter_bits == 24);
  }
}

TEST_CASE("fitted parameters reproduce f_o and the phase-noise point") {
  for (const auto& p : builtin_profiles()) {
    CAPTURE(p.name);
    CHECK(oscillator_frequency(p.r_nominal_ohm, p.widlar, p.vdd_v) ==
          rel(p.f_o_hz).epsilon(1e-12));
    const double l = phase_noise_db(p.phase_noise_ref.offset_hz, kDroStages, {}, p.widlar, p);
    CHECK(l == rel(p.phase_noise_ref.l_dbc_per_hz).epsilon(1e-12));
  }
}

TEST_CASE("serialize then load round-trips exactly") {
  for (const auto& p : builtin_profiles()) {
    const DeviceProfile back = load_profile(serialize_profile(p));
    CHECK(back == p);
    CHECK(serialize_profile(back) == serialize_profile(p));
  }
}

TEST_CASE("minimal config fills defaults and fits the rest") {
  const DeviceProfile p = load_profile(kMinimal);
  CHECK(p.name == "tiny");
  CHECK(p.r_nominal_ohm == rel(std::sqrt(100.0 * 20e3)));
  CHECK(p.widlar.eta > 0.0);
  CHECK(p.widlar.c_eff_f > 0.0);
  CHECK_FALSE(p.reference.has_value());
}

TEST_CASE("config errors carry line numbers") {
  SUBCASE("unknown key") {
    try {
      load_profile(std::string(kMinimal) + "\n# comment\nbogus.key = 3\n");
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(e.line() == 15);
    }
  }
  SUBCASE("malformed number") {
    try {
      load_profile("name = x\nsupply.vdd_v = 2V\n");
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(e.line() == 2);
    }
  }
  SUBCASE("duplicate key") {
    CHECK_THROWS_AS(load_profile("name = x\nname = y\n"), ConfigError);
  }
  SUBCASE("missing equals") {
    CHECK_THROWS_AS(load_profile("name x\n"), ConfigError);
  }
  SUBCASE("bad regime") {
    CHECK_THROWS_AS(load_profile("name = x\nwidlar.regime = medium\n"), ConfigError);
  }
}

TEST_CASE("validation names the offending field") {
  auto expect_field = [](const std::string& text, const std::string& field) {
    try {
      load_profile(text);
      FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
      CHECK(e.field() == field);
    }
  };
  expect_field("supply.vdd_v = 2\n", "name");
  expect_field(std::string(kMinimal) + "sensor.r_nominal_ohm = 50\n", "sensor.r_nominal_ohm");
  expect_field(std::string(kMinimal) + "counter.bits = 22\n", "counter.bits");
  expect_field(std::string(kMinimal) + "readout.phase0_cycles = 1\n", "readout.phase0_cycles");

  DeviceProfile p = builtin_profiles()[0];
  p.r_max_ohm = 50e3;
  CHECK_THROWS_AS(validate(p), ValidationError);
  p = builtin_profiles()[0];
  p.t_meas_s = 2.0;
  CHECK_THROWS_AS(validate(p), ValidationError);
  p = builtin_profiles()[0];
  p.jitter_slope = -1e-9;
  CHECK_THROWS_AS(validate(p), ValidationError);
}

TEST_CASE("resolve_profile accepts names and paths") {
  CHECK(resolve_profile("d2").name == "d2");
  const DeviceProfile c = resolve_profile(data_path("custom.cfg"));
  CHECK(c.name == "custom");
  CHECK(c.white_jitter_coeff == 1e-9);
  CHECK_THROWS_AS(resolve_profile(data_path("does_not_exist.cfg")), ConfigError);
}
