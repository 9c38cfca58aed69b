#include "rdc/noise.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "rdc/errors.hpp"
#include "rdc/oscillator.hpp"
#include "rdc/rng.hpp"

namespace rdc {

namespace {

double effective_swing(const WidlarParams& w, double vdd_v) {
  return w.r_l_i_tail_v > 0.0 ? w.r_l_i_tail_v : vdd_v;
}

// Stream 0 of a seed drives the jitter path.
constexpr std::uint64_t kJitterStream = 0;

}  // namespace

PhaseNoiseSpec PhaseNoiseSpec::inverse_square(double l_dbc_at_ref, double ref_offset_hz,
                                              double f_o_hz, double f_low_hz, double f_high_hz) {
  PhaseNoiseSpec spec;
  const double coeff = std::pow(10.0, l_dbc_at_ref / 10.0) * ref_offset_hz * ref_offset_hz;
  spec.inverse_square_coeff = coeff;
  spec.l_dbc = [coeff](double df) { return 10.0 * std::log10(coeff / (df * df)); };
  spec.f_o_hz = f_o_hz;
  spec.f_low_hz = f_low_hz;
  spec.f_high_hz = f_high_hz > 0.0 ? f_high_hz : f_o_hz / 2.0;
  return spec;
}

JitterModel jitter_model(const DeviceProfile& profile) {
  return {profile.white_jitter_coeff, profile.jitter_slope};
}

double phase_noise_linear(double delta_f_hz, int n_stages, const PhysicalConstants& consts,
                          const WidlarParams& w, const DeviceProfile& profile) {
  if (!(delta_f_hz > 0.0)) throw DomainError("offset frequency must be positive");
  if (n_stages < 3) throw DomainError("a ring needs at least 3 stages");
  if (!(profile.active_power_w > 0.0)) throw DomainError("power must be positive");
  if (!(w.eta > 0.0)) throw DomainError("stage delay ratio eta must be positive");
  const double swing = effective_swing(w, profile.vdd_v);
  const double v_char = characteristic_voltage(w);
  if (!(swing > 0.0) || !(v_char > 0.0)) throw DomainError("output swing and V_char must be positive");
  const double kt_over_p = consts.boltzmann_j_per_k * consts.temperature_k / profile.active_power_w;
  const double shape = profile.vdd_v / v_char + profile.vdd_v / swing;
  const double ratio = profile.f_o_hz / delta_f_hz;
  return 8.0 / (3.0 * w.eta) * n_stages * kt_over_p * shape * ratio * ratio;
}

double phase_noise_db(double delta_f_hz, int n_stages, const PhysicalConstants& consts,
                      const WidlarParams& w, const DeviceProfile& profile) {
  return 10.0 * std::log10(phase_noise_linear(delta_f_hz, n_stages, consts, w, profile));
}

double fit_eta_to_reference(const DeviceProfile& profile, const WidlarParams& w,
                            const PhysicalConstants& consts) {
  WidlarParams unit = w;
  unit.eta = 1.0;
  const double at_unit_eta =
      phase_noise_linear(profile.phase_noise_ref.offset_hz, kDroStages, consts, unit, profile);
  const double target = std::pow(10.0, profile.phase_noise_ref.l_dbc_per_hz / 10.0);
  return at_unit_eta / target;
}

double integrated_phase_noise(const PhaseNoiseSpec& spec) {
  const double f1 = spec.f_low_hz;
  const double f2 = spec.f_high_hz;
  if (!(f1 > 0.0)) throw DomainError("integration band must not touch 0 Hz (divergent integral)");
  if (!(f2 > f1)) throw DomainError("integration band is empty");
  if (spec.inverse_square_coeff) {
    return *spec.inverse_square_coeff * (1.0 / f1 - 1.0 / f2);
  }
  if (!spec.l_dbc) throw DomainError("phase-noise profile is not set");
  // Composite Simpson in u = ln f: integrand 10^(L(e^u)/10) * e^u.
  constexpr int kIntervals = 20000;
  const double u1 = std::log(f1);
  const double h = (std::log(f2) - u1) / kIntervals;
  auto g = [&](double u) {
    const double f = std::exp(u);
    const double l = spec.l_dbc(f);
    if (!std::isfinite(l)) throw DomainError("phase-noise profile not finite on the band");
    return std::pow(10.0, l / 10.0) * f;
  };
  double sum = g(u1) + g(u1 + h * kIntervals);
  for (int i = 1; i < kIntervals; ++i) {
    sum += (i % 2 ? 4.0 : 2.0) * g(u1 + h * i);
  }
  return sum * h / 3.0;
}

double rms_jitter_from_integrated_db(double a_dbc, double f_o_hz) {
  if (!(f_o_hz > 0.0)) throw DomainError("carrier frequency must be positive");
  return std::sqrt(2.0 * std::pow(10.0, a_dbc / 10.0)) / (2.0 * std::numbers::pi * f_o_hz);
}

double integrated_jitter(const PhaseNoiseSpec& spec) {
  const double a_dbc = 10.0 * std::log10(integrated_phase_noise(spec));
  return rms_jitter_from_integrated_db(a_dbc, spec.f_o_hz);
}

double white_coeff_from_phase_noise(double l_dbc, double offset_hz, double f_o_hz) {
  if (!(f_o_hz > 0.0) || !(offset_hz > 0.0)) throw DomainError("frequencies must be positive");
  return std::sqrt(std::pow(10.0, l_dbc / 10.0)) * offset_hz / f_o_hz;
}

double accumulated_jitter(const JitterModel& model, double t_s) {
  if (!(t_s >= 0.0)) throw DomainError("time must be nonnegative");
  const double white = model.a * model.a * t_s;
  const double flicker = model.k * t_s;
  return std::sqrt(white + flicker * flicker);
}

double jitter_slope(const JitterModel& model, double t1_s, double t2_s) {
  if (!(t1_s > 0.0) || !(t2_s > t1_s)) throw DomainError("need 0 < t1 < t2");
  if (model.a == 0.0) return model.k;
  return (accumulated_jitter(model, t2_s) - accumulated_jitter(model, t1_s)) / (t2_s - t1_s);
}

double jitter_slope(std::span<const JitterPoint> curve, double t1_s, double t2_s) {
  if (!(t1_s > 0.0) || !(t2_s > t1_s)) throw DomainError("need 0 < t1 < t2");
  if (curve.size() < 2) throw DomainError("jitter curve needs at least 2 points");
  auto at = [&](double t) {
    if (t < curve.front().t_s || t > curve.back().t_s) {
      throw RangeError("time " + std::to_string(t) + " outside the sampled jitter curve");
    }
    for (std::size_t i = 1; i < curve.size(); ++i) {
      if (t <= curve[i].t_s) {
        const auto& p = curve[i - 1];
        const auto& q = curve[i];
        if (q.t_s == p.t_s) return q.rms_s;
        return p.rms_s + (q.rms_s - p.rms_s) * (t - p.t_s) / (q.t_s - p.t_s);
      }
    }
    return curve.back().rms_s;
  };
  return (at(t2_s) - at(t1_s)) / (t2_s - t1_s);
}

std::vector<double> sample_timing_path(const JitterModel& model,
                                       std::span<const double> checkpoints_s, std::uint64_t seed) {
  Rng rng(derive_seed(seed, kJitterStream));
  const double drift = model.k * rng.normal();
  std::vector<double> out(checkpoints_s.size());
  double wiener = 0.0;
  double t_prev = 0.0;
  for (std::size_t j = 0; j < checkpoints_s.size(); ++j) {
    const double t = checkpoints_s[j];
    if (!(t >= t_prev)) throw DomainError("checkpoints must be nonnegative and nondecreasing");
    wiener += std::sqrt(t - t_prev) * rng.normal();
    out[j] = model.a * wiener + drift * t;
    t_prev = t;
  }
  return out;
}

double sample_timing_error(const JitterModel& model, double t_s, std::uint64_t seed) {
  const double t[1] = {t_s};
  return sample_timing_path(model, t, seed).front();
}

}  // namespace rdc
