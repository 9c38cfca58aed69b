#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "rdc/profiles.hpp"

namespace rdc {

/// Single-sideband phase-noise profile over an integration band.
///
/// When `inverse_square_coeff` is set the profile is the pure
/// L(df) = coeff / df^2 (linear units) and band integrals are evaluated in
/// closed form; otherwise `l_dbc` is integrated numerically.
struct PhaseNoiseSpec {
  std::function<double(double)> l_dbc;  // dBc/Hz at an offset in Hz
  double f_o_hz = 0.0;
  double f_low_hz = 1.0e3;
  double f_high_hz = 0.0;
  std::optional<double> inverse_square_coeff;

  /// 1/df^2 profile through `l_dbc_at_ref` at `ref_offset_hz`. The band
  /// defaults to [1 kHz, f_o / 2].
  static PhaseNoiseSpec inverse_square(double l_dbc_at_ref, double ref_offset_hz, double f_o_hz,
                                       double f_low_hz = 1.0e3, double f_high_hz = 0.0);
};

/// rms(t) = sqrt((a sqrt(t))^2 + (k t)^2).
struct JitterModel {
  double a = 0.0;  // white coefficient, s^(1/2)
  double k = 0.0;  // correlated slope, s/s

  bool operator==(const JitterModel&) const = default;
};

JitterModel jitter_model(const DeviceProfile& profile);

/// Linear SSB phase noise of the ring, per Hz, relative to the carrier.
/// Throws DomainError for zero power, zero swing or non-positive offset.
double phase_noise_linear(double delta_f_hz, int n_stages, const PhysicalConstants& consts,
                          const WidlarParams& w, const DeviceProfile& profile);
double phase_noise_db(double delta_f_hz, int n_stages, const PhysicalConstants& consts,
                      const WidlarParams& w, const DeviceProfile& profile);

/// The stage delay ratio that places the profile's phase noise exactly on
/// its reference point. Phase noise scales as 1/eta, so this is closed form.
double fit_eta_to_reference(const DeviceProfile& profile, const WidlarParams& w,
                            const PhysicalConstants& consts = {});

/// Integral of 10^(L/10) over the band, linear units (rad^2 equivalent).
double integrated_phase_noise(const PhaseNoiseSpec& spec);

/// RMS jitter from integrated phase-noise power A in dBc:
/// sqrt(2 * 10^(A/10)) / (2 pi f_o).
double rms_jitter_from_integrated_db(double a_dbc, double f_o_hz);

/// rms_jitter_from_integrated_db applied to the band integral of `spec`.
/// Throws DomainError when the band touches zero or is empty.
double integrated_jitter(const PhaseNoiseSpec& spec);

/// White-jitter coefficient implied by a 1/df^2 phase-noise point:
/// a = sqrt(L(df) * df^2) / f_o.
double white_coeff_from_phase_noise(double l_dbc, double offset_hz, double f_o_hz);

double accumulated_jitter(const JitterModel& model, double t_s);

/// Secant slope (J(t2) - J(t1)) / (t2 - t1); requires 0 < t1 < t2.
double jitter_slope(const JitterModel& model, double t1_s = 0.1e-3, double t2_s = 10.0e-3);

struct JitterPoint {
  double t_s = 0.0;
  double rms_s = 0.0;
};

/// Secant slope on a sampled curve, linearly interpolated in t.
double jitter_slope(std::span<const JitterPoint> curve, double t1_s = 0.1e-3,
                    double t2_s = 10.0e-3);

/// Timing error e(t) = a W(t) + c t along `checkpoints_s` for one seed:
/// c ~ Normal(0, k) is fixed per seed and W is one Wiener path. Checkpoints
/// must be nonnegative and nondecreasing. Fully determined by the seed.
std::vector<double> sample_timing_path(const JitterModel& model,
                                       std::span<const double> checkpoints_s, std::uint64_t seed);

/// Single-time draw, identical to a one-checkpoint path.
double sample_timing_error(const JitterModel& model, double t_s, std::uint64_t seed);

}  // namespace rdc
