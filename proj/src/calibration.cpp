#include "rdc/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rdc/errors.hpp"
#include "rdc/parallel.hpp"
#include "rdc/rng.hpp"

namespace rdc {

double FittedInverse::frequency(double r_ohm) const {
  return correction.scale * base_curve.frequency(r_ohm) + correction.offset_hz;
}

double FittedInverse::f_min() const {
  return correction.scale * base_curve.f_min() + correction.offset_hz;
}

double FittedInverse::f_max() const {
  return correction.scale * base_curve.f_max() + correction.offset_hz;
}

FittedInverse fit_offline(const CalibrationSet& cal) {
  if (cal.kind != CalibrationKind::offline) throw FitError("offline fit needs an offline calibration set");
  if (cal.points.size() < 2) {
    throw FitError("offline fit needs at least 2 points, got " + std::to_string(cal.points.size()));
  }
  auto pts = cal.points;
  std::sort(pts.begin(), pts.end(),
            [](const CalibrationPoint& a, const CalibrationPoint& b) { return a.r_ohm < b.r_ohm; });
  std::vector<double> r, f;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i > 0 && pts[i].r_ohm == pts[i - 1].r_ohm) {
      throw FitError("calibration resistances must be distinct");
    }
    r.push_back(pts[i].r_ohm);
    f.push_back(pts[i].f_hz);
  }
  try {
    return FittedInverse{TransferCurve(std::move(r), std::move(f)), {}};
  } catch (const FitError& e) {
    throw FitError(std::string("calibration data not monotone: ") + e.what());
  }
}

FittedInverse online_update(const FittedInverse& fit, const CalibrationSet& online) {
  if (online.points.size() != 3) {
    throw FitError("online update takes exactly 3 points, got " + std::to_string(online.points.size()));
  }
  double xs[3], ys[3];
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& p = online.points[i];
    if (p.r_ohm < fit.base_curve.r_min() || p.r_ohm > fit.base_curve.r_max()) {
      throw FitError("online point R = " + std::to_string(p.r_ohm) + " outside the calibrated range");
    }
    xs[i] = fit.base_curve.frequency(p.r_ohm);
    ys[i] = p.f_hz;
  }
  const double mx = (xs[0] + xs[1] + xs[2]) / 3.0;
  const double my = (ys[0] + ys[1] + ys[2]) / 3.0;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (!(sxx > 0.0)) throw FitError("online points do not span the curve (repeated resistance)");
  const double scale = sxy / sxx;
  if (!(scale > 0.0)) {
    throw FitError("online update rejected: fitted scale " + std::to_string(scale) +
                   " would break monotonicity");
  }
  FittedInverse out = fit;
  out.correction = {scale, my - scale * mx};
  return out;
}

double invert(const FittedInverse& fit, double f_hz) {
  const double lo = fit.f_min();
  const double hi = fit.f_max();
  if (!(f_hz >= lo && f_hz <= hi)) {
    throw RangeError("frequency " + std::to_string(f_hz) + " Hz outside calibrated range [" +
                     std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  double base_f = (f_hz - fit.correction.offset_hz) / fit.correction.scale;
  base_f = std::clamp(base_f, fit.base_curve.f_min(), fit.base_curve.f_max());
  return fit.base_curve.resistance(base_f);
}

double invert_clamped(const FittedInverse& fit, double f_hz) {
  if (f_hz >= fit.f_max()) return fit.base_curve.r_min();
  if (f_hz <= fit.f_min()) return fit.base_curve.r_max();
  return invert(fit, f_hz);
}

namespace {

WidlarParams draw_device(const WidlarParams& nominal, double spread, Rng& rng) {
  WidlarParams w = nominal;
  w.c_eff_f *= std::max(0.05, 1.0 + spread * rng.normal());
  w.beta_a_per_v2 *= std::max(0.05, 1.0 + spread * rng.normal());
  return w;
}

double trial_error(const DeviceProfile& profile, const ExperimentConfig& cfg, double lo, double hi,
                   std::uint64_t trial) {
  Rng rng(derive_seed(cfg.seed, trial));
  const WidlarParams device = draw_device(profile.widlar, cfg.process_spread, rng);
  const WidlarParams representative = draw_device(profile.widlar, cfg.process_spread, rng);
  const double vdd = profile.vdd_v;

  // Test resistances first so they do not depend on n_offline.
  std::vector<double> test_r;
  while (test_r.size() < static_cast<std::size_t>(cfg.n_test)) {
    const double r = rng.uniform(lo, hi);
    if (r > lo && std::find(test_r.begin(), test_r.end(), r) == test_r.end()) test_r.push_back(r);
  }
  // Offline resistances: the online reference resistors first (ends, then
  // the geometric midpoint), then a growing prefix of draws. Sharing the
  // references makes the online fit compare like with like.
  const double mid = std::sqrt(lo * hi);
  std::vector<double> offline_r = {lo, hi};
  if (cfg.n_offline >= 3) offline_r.push_back(mid);
  while (offline_r.size() < static_cast<std::size_t>(cfg.n_offline)) {
    const double r = rng.uniform(lo, hi);
    const bool clash = std::find(offline_r.begin(), offline_r.end(), r) != offline_r.end() ||
                       std::find(test_r.begin(), test_r.end(), r) != test_r.end();
    if (r > lo && !clash) offline_r.push_back(r);
  }

  const WidlarParams& fitted_device =
      cfg.strategy == Strategy::per_batch_offline_online ? representative : device;
  CalibrationSet offline{{}, CalibrationKind::offline};
  for (double r : offline_r) {
    offline.points.push_back({r, oscillator_frequency(r, fitted_device, vdd)});
  }
  FittedInverse fit = fit_offline(offline);

  if (cfg.strategy != Strategy::per_device_offline) {
    CalibrationSet online{{}, CalibrationKind::online};
    for (double r : {lo, mid, hi}) {
      online.points.push_back({r, cfg.drift.apply(oscillator_frequency(r, device, vdd))});
    }
    fit = online_update(fit, online);
  }

  double ss = 0.0;
  for (double r : test_r) {
    const double measured = cfg.drift.apply(oscillator_frequency(r, device, vdd));
    const double rel = (invert_clamped(fit, measured) - r) / r;
    ss += rel * rel;
  }
  return std::sqrt(ss / static_cast<double>(test_r.size()));
}

}  // namespace

double rms_error_experiment(const DeviceProfile& profile, const ExperimentConfig& cfg) {
  const int min_offline = cfg.strategy == Strategy::reduced_offline_online ? 3 : 2;
  if (cfg.n_offline < min_offline) {
    throw ValidationError("n_offline", "needs at least " + std::to_string(min_offline) + " points");
  }
  if (cfg.trials < 1) throw ValidationError("trials", "must be positive");
  if (cfg.n_test < 1) throw ValidationError("n_test", "must be positive");
  if (!(cfg.drift.scale > 0.0)) throw ValidationError("drift.scale", "must be positive");
  const double lo = std::max(cfg.r_lo_ohm, profile.r_min_ohm);
  const double hi = std::min(cfg.r_hi_ohm, profile.r_max_ohm);
  if (!(hi > lo)) throw ValidationError("calibration range", "empty after clamping to the sensor range");

  std::vector<double> errors(static_cast<std::size_t>(cfg.trials));
  parallel_for(errors.size(), cfg.threads, [&](std::size_t t) {
    errors[t] = trial_error(profile, cfg, lo, hi, t);
  });
  double sum = 0.0;
  for (double e : errors) sum += e;
  return 100.0 * sum / static_cast<double>(errors.size());
}

}  // namespace rdc
