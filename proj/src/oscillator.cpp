#include "rdc/oscillator.hpp"

#include <cmath>
#include <string>

#include "rdc/errors.hpp"
#include "rdc/parallel.hpp"

namespace rdc {

TransferCurve::TransferCurve(std::vector<double> r_ohm, std::vector<double> f_hz)
    : interp_(r_ohm, f_hz) {
  if (interp_.increasing()) {
    throw FitError("transfer curve frequency must decrease with resistance");
  }
}

double widlar_current(double r_sensor_ohm, const WidlarParams& w) {
  if (!(r_sensor_ohm > 0.0)) {
    throw DomainError("sensor resistance must be positive, got " + std::to_string(r_sensor_ohm));
  }
  if (!(w.beta_a_per_v2 > 0.0) || !(w.overdrive_v() > 0.0)) {
    throw DomainError("Widlar source needs beta > 0 and V_SG > |V_Tp|");
  }
  // ((sqrt(2/beta + 4 R Vov) - sqrt(2/beta)) / (2R))^2, rewritten without the
  // cancelling difference: sqrt(a+b) - sqrt(a) = b / (sqrt(a+b) + sqrt(a)).
  const double a = 2.0 / w.beta_a_per_v2;
  const double b = 4.0 * r_sensor_ohm * w.overdrive_v();
  const double root_diff = b / (std::sqrt(a + b) + std::sqrt(a));
  const double i = root_diff / (2.0 * r_sensor_ohm);
  return i * i;
}

double stage_delay(double i_ss_a, const WidlarParams& w, double vdd_v) {
  if (!(i_ss_a > 0.0)) {
    throw DomainError("stage current must be positive, got " + std::to_string(i_ss_a));
  }
  return w.eta * w.c_eff_f * vdd_v / i_ss_a;
}

double dro_frequency(const StageDelays& delays) {
  double sum = 0.0;
  for (double t : delays.t_p_s) {
    if (!(t > 0.0)) throw DomainError("stage delay must be positive, got " + std::to_string(t));
    sum += t;
  }
  return 1.0 / (2.0 * sum);
}

double oscillator_frequency(double r_sensor_ohm, const WidlarParams& w, double vdd_v) {
  return oscillator_frequency({r_sensor_ohm, r_sensor_ohm, r_sensor_ohm}, w, vdd_v);
}

double oscillator_frequency(const std::array<double, 3>& r_stage_ohm, const WidlarParams& w,
                            double vdd_v) {
  StageDelays delays;
  for (std::size_t i = 0; i < 3; ++i) {
    delays.t_p_s[i] = stage_delay(widlar_current(r_stage_ohm[i], w), w, vdd_v);
  }
  return dro_frequency(delays);
}

double calibrate_c_eff(const DeviceProfile& profile) {
  const WidlarParams& w = profile.widlar;
  if (!(w.eta > 0.0)) throw ValidationError("widlar.eta", "must be positive before fitting c_eff");
  if (!(profile.f_o_hz > 0.0) || !(profile.vdd_v > 0.0)) {
    throw ValidationError("oscillator.f_o_hz", "f_o and V_DD must be positive to fit c_eff");
  }
  const double i = widlar_current(profile.r_nominal_ohm, w);
  // f = 1 / (2 * 3 * eta * C * V / I)
  return i / (6.0 * w.eta * profile.vdd_v * profile.f_o_hz);
}

TransferCurve sample_transfer_curve(const WidlarParams& w, double vdd_v, double r_lo_ohm,
                                    double r_hi_ohm, std::size_t n_points, unsigned threads) {
  if (n_points < 2) throw ValidationError("points", "transfer curve needs at least 2 points");
  if (!(r_lo_ohm > 0.0) || !(r_hi_ohm > r_lo_ohm)) {
    throw ValidationError("sensor range", "need 0 < R_min < R_max");
  }
  std::vector<double> r(n_points), f(n_points);
  const double log_lo = std::log(r_lo_ohm);
  const double log_hi = std::log(r_hi_ohm);
  parallel_for(n_points, threads, [&](std::size_t i) {
    if (i == 0) {
      r[i] = r_lo_ohm;
    } else if (i + 1 == n_points) {
      r[i] = r_hi_ohm;
    } else {
      const double u = static_cast<double>(i) / static_cast<double>(n_points - 1);
      r[i] = std::exp(log_lo + u * (log_hi - log_lo));
    }
    f[i] = oscillator_frequency(r[i], w, vdd_v);
  });
  return TransferCurve(std::move(r), std::move(f));
}

TransferCurve transfer_curve(const DeviceProfile& profile, std::size_t n_points,
                             unsigned threads) {
  return transfer_curve(profile, profile.widlar, n_points, threads);
}

TransferCurve transfer_curve(const DeviceProfile& profile, const WidlarParams& w,
                             std::size_t n_points, unsigned threads) {
  return sample_transfer_curve(w, profile.vdd_v, profile.r_min_ohm, profile.r_max_ohm, n_points,
                               threads);
}

std::optional<double> saturation_resistance(const WidlarParams& w, double vdd_v, double fraction,
                                            double r_lo_ohm, double r_hi_ohm) {
  constexpr std::size_t kGrid = 20001;
  const double log_lo = std::log(r_lo_ohm);
  const double step = (std::log(r_hi_ohm) - log_lo) / static_cast<double>(kGrid - 1);
  std::vector<double> f(kGrid);
  for (std::size_t i = 0; i < kGrid; ++i) {
    f[i] = oscillator_frequency(std::exp(log_lo + step * static_cast<double>(i)), w, vdd_v);
  }
  // Central-difference |df/dlnR| at the interior points.
  std::vector<double> slope(kGrid, 0.0);
  std::size_t peak = 1;
  for (std::size_t i = 1; i + 1 < kGrid; ++i) {
    slope[i] = std::fabs(f[i + 1] - f[i - 1]) / (2.0 * step);
    if (slope[i] > slope[peak]) peak = i;
  }
  for (std::size_t i = peak; i + 1 < kGrid; ++i) {
    if (slope[i] < fraction * slope[peak]) return std::exp(log_lo + step * static_cast<double>(i));
  }
  return std::nullopt;
}

double characteristic_voltage(const WidlarParams& w, ChannelRegime regime) {
  if (!(w.gamma > 0.0)) throw DomainError("noise coefficient gamma must be positive");
  return regime == ChannelRegime::long_channel ? w.delta_v_v / w.gamma
                                               : w.e_c_v_per_m * w.channel_length_m / w.gamma;
}

}  // namespace rdc
