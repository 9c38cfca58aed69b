#pragma once

#include <array>
#include <optional>
#include <vector>

#include "rdc/monotone_cubic.hpp"
#include "rdc/profiles.hpp"

namespace rdc {

/// Resistance-to-frequency samples with a monotone interpolant through them.
/// Resistances strictly increase; frequencies strictly decrease.
class TransferCurve {
public:
  TransferCurve() = default;
  TransferCurve(std::vector<double> r_ohm, std::vector<double> f_hz);

  double frequency(double r_ohm) const { return interp_(r_ohm); }
  /// Resistance for a frequency inside the sampled range.
  double resistance(double f_hz) const { return interp_.solve(f_hz); }

  const std::vector<double>& resistances() const { return interp_.x(); }
  const std::vector<double>& frequencies() const { return interp_.y(); }
  const MonotoneCubic& interpolant() const { return interp_; }

  double r_min() const { return interp_.x_min(); }
  double r_max() const { return interp_.x_max(); }
  double f_min() const { return interp_.y_min(); }
  double f_max() const { return interp_.y_max(); }
  std::size_t size() const { return interp_.x().size(); }

private:
  MonotoneCubic interp_;
};

/// Per-stage delays of the ring, one entry per stage.
struct StageDelays {
  std::array<double, 3> t_p_s{};
};

/// Widlar source output current for the sensor as degeneration resistor.
/// Throws DomainError for r_sensor <= 0.
double widlar_current(double r_sensor_ohm, const WidlarParams& w);

/// t_p = eta * c_eff * vdd / i_ss. Throws DomainError for i_ss <= 0.
double stage_delay(double i_ss_a, const WidlarParams& w, double vdd_v);

/// 1 / (2 * sum of stage delays).
double dro_frequency(const StageDelays& delays);

/// Forward model R -> I_SS -> t_p -> f with all stages at the same resistance.
double oscillator_frequency(double r_sensor_ohm, const WidlarParams& w, double vdd_v);

/// Forward model with a separate resistance per stage.
double oscillator_frequency(const std::array<double, 3>& r_stage_ohm, const WidlarParams& w,
                            double vdd_v);

/// Effective stage capacitance that puts the nominal resistance at `f_o`.
double calibrate_c_eff(const DeviceProfile& profile);

/// Log-uniform samples over [r_lo, r_hi].
TransferCurve sample_transfer_curve(const WidlarParams& w, double vdd_v, double r_lo_ohm,
                                    double r_hi_ohm, std::size_t n_points, unsigned threads = 1);

/// Samples the profile's sensor range; n_points >= 2.
TransferCurve transfer_curve(const DeviceProfile& profile, std::size_t n_points,
                             unsigned threads = 1);
TransferCurve transfer_curve(const DeviceProfile& profile, const WidlarParams& w,
                             std::size_t n_points, unsigned threads = 1);

/// Smallest resistance above the steepest point at which |df/dlnR| falls
/// below `fraction` of its peak, scanning [r_lo, r_hi] on a dense log grid.
/// Empty when the slope never falls that far inside the scan.
std::optional<double> saturation_resistance(const WidlarParams& w, double vdd_v,
                                            double fraction = 0.01, double r_lo_ohm = 1.0,
                                            double r_hi_ohm = 1.0e7);

/// Delta V / gamma for long channels, E_c * L / gamma for short channels.
double characteristic_voltage(const WidlarParams& w, ChannelRegime regime);
inline double characteristic_voltage(const WidlarParams& w) {
  return characteristic_voltage(w, w.regime);
}

}  // namespace rdc
