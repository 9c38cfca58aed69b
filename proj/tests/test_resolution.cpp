#include <doctest.h>

#include "approx.hpp"

#include <cmath>
#include <vector>

#include "rdc/errors.hpp"
#include "rdc/profiles.hpp"
#include "rdc/resolution.hpp"

using namespace rdc;

TEST_CASE("maximum bits from a count") {
  // log2 values from mpmath.
  CHECK(max_bits_from_count(765959) == rel(19.5469076446).epsilon(1e-10));
  CHECK(max_bits_from_count(2101999) == rel(21.0033305523).epsilon(1e-10));
  CHECK(max_bits_from_count(3126546) == rel(21.5761383127).epsilon(1e-10));
  CHECK(max_bits_from_count(1) == 0.0);
  CHECK(max_bits_from_count(1024) == 10.0);
  CHECK_THROWS_AS(max_bits_from_count(0), DomainError);
}

TEST_CASE("analytic resolution") {
  const double T = 1.0 / 83.2e6;
  CHECK(sqej(T, 1.88e-6, 10e-3) == rel(3.0819230769e-6).epsilon(1e-10));
  CHECK(analytic_bits(T, 1.88e-6, 10e-3) == rel(18.30773771588).epsilon(1e-11));
  CHECK(analytic_bits_asymptote(1.88e-6) == rel(19.0208359074).epsilon(1e-11));
  CHECK(analytic_bits_asymptote(3.67e-7) == rel(21.3777166011).epsilon(1e-11));
  CHECK(analytic_bits_asymptote(1.55e-7) == rel(22.6212284487).epsilon(1e-11));
  CHECK(std::isinf(analytic_bits_asymptote(0.0)));
  // Without jitter, doubling the readout time adds one bit.
  CHECK(analytic_bits(T, 0.0, 2e-3) - analytic_bits(T, 0.0, 1e-3) == rel(1.0));
  // Bits approach but never exceed the asymptote.
  CHECK(analytic_bits(T, 1.88e-6, 100.0) < analytic_bits_asymptote(1.88e-6));
  CHECK(analytic_bits(T, 1.88e-6, 100.0) == rel(analytic_bits_asymptote(1.88e-6)).epsilon(1e-4));
  CHECK_THROWS_AS(sqej(T, 1e-6, 0.0), DomainError);
}

TEST_CASE("trace statistics use the sample deviation") {
  const auto tr = make_trace({1e-3, 2e-3}, {1, 2, 3}, {{10, 20}, {12, 20}, {14, 23}});
  CHECK(tr.mean[0] == rel(12.0));
  CHECK(tr.sigma[0] == rel(2.0));
  CHECK(tr.mean[1] == rel(21.0));
  CHECK(tr.sigma[1] == rel(std::sqrt(3.0)));
  CHECK_THROWS_AS(make_trace({1e-3}, {1, 2}, {{1}, {1, 2}}), ValidationError);

  const auto rc = resolution_curve(tr);
  CHECK(rc.points[0].bits == rel(std::log2(6.0)));
  REQUIRE(rc.saturation_time_s.has_value());
  CHECK(*rc.saturation_time_s == 1e-3);
  CHECK_FALSE(resolution_curve(tr, 2.5).saturation_time_s.has_value());
}

TEST_CASE("zero-jitter Monte-Carlo equals the ideal counter") {
  DeviceProfile p = builtin_profiles()[0];
  p.phase0_cycles = 0.25;
  const auto cps = parse_checkpoints("log:1us:100ms:30");
  const auto seeds = default_seeds(5);
  const auto tr = monte_carlo(p, JitterModel{}, seeds, cps);
  for (std::size_t j = 0; j < cps.size(); ++j) {
    const double expected = std::floor(p.f_o_hz * cps[j] + 0.25);
    for (const auto& row : tr.counts) CHECK(static_cast<double>(row[j]) == expected);
    CHECK(tr.sigma[j] == 0.0);
  }
  // The resolution curve reduces to log2 of the count.
  const auto rc = resolution_curve(tr);
  CHECK_FALSE(rc.saturation_time_s.has_value());
  CHECK(rc.points.back().bits == rel(std::log2(std::floor(p.f_o_hz * 0.1 + 0.25))));
  CHECK(std::fabs(std::exp2(rc.points[10].bits) - p.f_o_hz * cps[10]) <= 1.0);
}

TEST_CASE("Monte-Carlo is deterministic and independent of worker count") {
  const DeviceProfile p = builtin_profiles()[1];
  const auto cps = parse_checkpoints("log:10us:100ms:25");
  const auto seeds = default_seeds(64);
  MonteCarloOptions one, many;
  one.threads = 1;
  many.threads = 8;
  one.supply_noise_vpp = many.supply_noise_vpp = 0.01;
  const auto a = monte_carlo(p, jitter_model(p), seeds, cps, one);
  const auto b = monte_carlo(p, jitter_model(p), seeds, cps, many);
  CHECK(a.counts == b.counts);
  CHECK(a.mean == b.mean);
  CHECK(a.sigma == b.sigma);
  for (const auto& row : a.counts) {
    for (std::size_t j = 1; j < row.size(); ++j) CHECK(row[j] >= row[j - 1]);
  }
}

TEST_CASE("Monte-Carlo spread follows f_o k t") {
  const DeviceProfile p = builtin_profiles()[0];
  const std::vector<double> cps{50e-3};
  const auto tr = monte_carlo(p, jitter_model(p), default_seeds(20000), cps);
  CHECK(tr.sigma[0] == rel(p.f_o_hz * p.jitter_slope * 50e-3).epsilon(0.03));
}

TEST_CASE("Monte-Carlo input checks") {
  const DeviceProfile p = builtin_profiles()[0];
  const std::vector<double> cps{1e-3};
  const auto one_seed = default_seeds(1);
  CHECK_THROWS_AS(monte_carlo(p, jitter_model(p), one_seed, cps), ValidationError);
  const auto seeds = default_seeds(3);
  const std::vector<double> bad{2e-3, 1e-3};
  CHECK_THROWS_AS(monte_carlo(p, jitter_model(p), seeds, bad), ValidationError);
  // 1 s at 83.2 MHz does not fit a 24-bit counter.
  const std::vector<double> long_gate{1.0};
  CHECK_THROWS_AS(monte_carlo(p, jitter_model(p), seeds, long_gate), OverflowError);
  MonteCarloOptions wide;
  wide.counter_bits = 32;
  CHECK_NOTHROW(monte_carlo(p, jitter_model(p), seeds, long_gate, wide));
}

TEST_CASE("supply ripple costs resolution") {
  const DeviceProfile p = builtin_profiles()[1];
  const auto cps = parse_checkpoints("log:1us:100ms:50");
  const std::vector<double> amps{0.0, 0.005, 0.01, 0.02, 0.05};
  const auto sweep = supply_noise_sweep(p, jitter_model(p), amps, default_seeds(50), cps);
  REQUIRE(sweep.size() == amps.size());
  for (std::size_t i = 1; i < sweep.size(); ++i) CHECK(sweep[i].bits <= sweep[i - 1].bits);
  // With no ripple the sweep matches a plain run.
  const auto plain = resolution_curve(monte_carlo(p, jitter_model(p), default_seeds(50), cps));
  CHECK(sweep[0].bits == plain.max_bits);
}

TEST_CASE("operating point moves frequency and jitter") {
  const DeviceProfile p = builtin_profiles()[0];
  const DeviceProfile same = at_operating_point(p, p.vdd_v, p.vt.t_nominal_c);
  CHECK(same.f_o_hz == p.f_o_hz);
  CHECK(same.jitter_slope == p.jitter_slope);
  const DeviceProfile hot = at_operating_point(p, p.vdd_v, p.vt.t_nominal_c + 10.0);
  CHECK(hot.f_o_hz == rel(p.f_o_hz + 10.0 * p.temp_coeff_hz_per_k));
  CHECK(hot.jitter_slope == rel(p.jitter_slope * (1.0 + 10.0 * p.vt.k_per_k)));

  const auto cps = parse_checkpoints("log:1us:100ms:40");
  const auto r = vt_sensitivity_sweep(p, jitter_model(p), {1.6, 1.9}, {-20.0, 80.0}, 3, 3,
                                      default_seeds(10), cps);
  CHECK(r.grid.size() == 9);
  CHECK(r.worst_bits <= r.best_bits);
  const auto nominal = vt_sensitivity_sweep(p, jitter_model(p), {1.6, 1.9}, {-20.0, 80.0}, 1, 1,
                                            default_seeds(10), cps);
  REQUIRE(nominal.grid.size() == 1);
  CHECK(nominal.grid[0].supply_v == p.vdd_v);
  CHECK(nominal.grid[0].temp_c == p.vt.t_nominal_c);
}

TEST_CASE("duration and checkpoint parsing") {
  CHECK(parse_duration("10ms") == rel(10e-3));
  CHECK(parse_duration("1us") == rel(1e-6));
  CHECK(parse_duration("500ns") == rel(500e-9));
  CHECK(parse_duration("2.5e-3") == 2.5e-3);
  CHECK(parse_duration("1s") == 1.0);
  CHECK_THROWS_AS(parse_duration("10 parsecs"), ValidationError);

  const auto log = parse_checkpoints("log:1us:100ms:50");
  REQUIRE(log.size() == 50);
  CHECK(log.front() == rel(1e-6));
  CHECK(log.back() == rel(0.1));
  CHECK(log[1] / log[0] == rel(std::pow(1e5, 1.0 / 49.0)));
  const auto lin = parse_checkpoints("lin:1ms:10ms:10");
  CHECK(lin[4] == rel(5e-3));
  const auto list = parse_checkpoints("1ms,2ms,5ms");
  REQUIRE(list.size() == 3);
  CHECK(list[2] == rel(5e-3));
  CHECK_THROWS_AS(parse_checkpoints("log:1ms:1us:5"), ValidationError);
  CHECK_THROWS_AS(parse_checkpoints("2ms,1ms"), ValidationError);
  CHECK_THROWS_AS(parse_checkpoints("cubic:1:2:3"), ValidationError);
}
