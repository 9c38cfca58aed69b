#pragma once

#include <cstdint>
#include <vector>

#include "rdc/oscillator.hpp"
#include "rdc/profiles.hpp"

namespace rdc {

enum class CalibrationKind { offline, online };

struct CalibrationPoint {
  double r_ohm = 0.0;
  double f_hz = 0.0;
};

struct CalibrationSet {
  std::vector<CalibrationPoint> points;
  CalibrationKind kind = CalibrationKind::offline;
};

/// Affine correction of the frequency axis: f_device = scale * f_base + offset.
struct OnlineCorrection {
  double scale = 1.0;
  double offset_hz = 0.0;
};

/// Offline transfer curve plus the current online correction.
struct FittedInverse {
  TransferCurve base_curve;
  OnlineCorrection correction;

  /// Corrected forward curve at `r_ohm`.
  double frequency(double r_ohm) const;
  double f_min() const;
  double f_max() const;
};

/// Monotone piecewise-cubic fit through the offline points (any order).
/// Throws FitError for fewer than 2 points, repeated resistances, an
/// online set, or frequencies that do not fall strictly with resistance.
FittedInverse fit_offline(const CalibrationSet& cal);

/// Least-squares scale and offset that map the base curve onto exactly 3
/// fresh points. Throws FitError when the fitted scale is not positive or
/// a point lies outside the base curve's resistance range.
FittedInverse online_update(const FittedInverse& fit, const CalibrationSet& online);

/// Resistance whose corrected frequency equals `f_hz`. Throws RangeError
/// outside the corrected range.
double invert(const FittedInverse& fit, double f_hz);

/// Like invert, but readings beyond the calibrated span return the
/// nearest end of the resistance range.
double invert_clamped(const FittedInverse& fit, double f_hz);

/// Affine frequency drift between calibration and measurement.
struct DriftModel {
  double scale = 1.0;
  double offset_hz = 0.0;

  double apply(double f_hz) const { return scale * f_hz + offset_hz; }
};

enum class Strategy {
  per_device_offline = 1,         // method 1
  per_batch_offline_online = 2,   // method 2
  reduced_offline_online = 3,     // method 3
};

struct ExperimentConfig {
  Strategy strategy = Strategy::per_device_offline;
  int n_offline = 5;
  DriftModel drift;
  int trials = 500;
  std::uint64_t seed = 1;
  int n_test = 5;
  double r_lo_ohm = 2.0e3;   // clamped to the profile sensor range
  double r_hi_ohm = 20.0e3;
  double process_spread = 0.05;  // relative sigma on c_eff and beta, per device
  unsigned threads = 0;
};

/// Mean over trials of the RMS relative resistance error, in percent.
///
/// Each trial draws a device (process spread on c_eff and beta), n_test
/// uniform test resistances and n_offline offline resistances. The offline
/// set starts with the three online reference resistors (range ends, then
/// their geometric mean) and is filled with uniform draws, so sets for
/// growing n_offline are nested. Offline points are measured without
/// drift, test and online points with drift. Strategy 2 fits its offline
/// curve on a second, independently drawn device from the same batch.
double rms_error_experiment(const DeviceProfile& profile, const ExperimentConfig& cfg);

}  // namespace rdc
