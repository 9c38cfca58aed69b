#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rdc {

struct PhysicalConstants {
  double boltzmann_j_per_k = 1.380649e-23;
  double temperature_k = 300.0;
};

enum class ChannelRegime { long_channel, short_channel };

/// Bias and device parameters of the Widlar source and the DRO stage.
///
/// `beta_m2` and `v_sg_m1` are not published for the fabricated designs;
/// the built-in values are fitted so the transfer curve saturates near
/// 20 kOhm. `eta` and `c_eff` are per-profile calibration constants: a value
/// of zero in a configuration file means "fit on load" (see load_profile).
struct WidlarParams {
  double beta_a_per_v2 = 0.1;
  double v_sg_v = 1.2;
  double v_tp_abs_v = 0.7;
  double eta = 0.0;
  double c_eff_f = 0.0;
  double delta_v_v = 0.4;
  double gamma = 2.0 / 3.0;
  double e_c_v_per_m = 4.0e6;
  double channel_length_m = 0.35e-6;
  double r_l_i_tail_v = 0.0;  // output swing; zero means "rail to rail" (= V_DD)
  ChannelRegime regime = ChannelRegime::long_channel;

  double overdrive_v() const { return v_sg_v - v_tp_abs_v; }

  bool operator==(const WidlarParams&) const = default;
};

/// Linear coefficients for the voltage/temperature sensitivity sweep.
/// Frequency moves with the profile's supply pushing and temperature
/// coefficient; the jitter slope is scaled by (1 + k_per_v*dV + k_per_k*dT).
struct VtCoefficients {
  double v_nominal_v = 0.0;  // zero means "use the profile supply"
  double t_nominal_c = 27.0;
  double k_per_v = 0.0;
  double k_per_k = 0.0;

  bool operator==(const VtCoefficients&) const = default;
};

/// Published reference values kept next to a profile so derived columns
/// can be checked against them.
struct TableReference {
  double resolution_bits = 0.0;
  double energy_j = 0.0;
  double fom_j_per_cs = 0.0;
  double dynamic_range_db = 0.0;

  bool operator==(const TableReference&) const = default;
};

struct PhaseNoiseRef {
  double offset_hz = 1.0e6;
  double l_dbc_per_hz = -100.0;

  bool operator==(const PhaseNoiseRef&) const = default;
};

/// Full parameter set for one converter design.
struct DeviceProfile {
  std::string name;
  double technology_node_m = 0.35e-6;
  double vdd_v = 0.0;
  double f_o_hz = 0.0;
  double active_power_w = 0.0;
  PhaseNoiseRef phase_noise_ref;
  double jitter_slope = 0.0;        // k, seconds of rms jitter per second
  double white_jitter_coeff = 0.0;  // a, rms_white(t) = a*sqrt(t)
  double t_meas_s = 0.0;
  double readout_period_s = 0.0;
  double phase0_cycles = 0.0;
  int counter_bits = 24;
  double r_min_ohm = 0.0;
  double r_max_ohm = 0.0;
  double r_nominal_ohm = 0.0;
  double supply_pushing_hz_per_v = 0.0;
  double temp_coeff_hz_per_k = 0.0;
  WidlarParams widlar;
  VtCoefficients vt;
  std::optional<TableReference> reference;

  bool operator==(const DeviceProfile&) const = default;
};

/// Upper bound of the usable sensor range; the oscillator frequency
/// stops responding to the sensor above it.
inline constexpr double kMaxSensorOhm = 20.0e3;

/// Stages in the differential ring oscillator.
inline constexpr int kDroStages = 3;

/// Parses flat `key = value` text (dotted section prefixes, `#` comments),
/// fills fitted parameters left at zero, and validates the result.
/// Throws ConfigError on malformed text and ValidationError on invariants.
DeviceProfile load_profile(std::string_view source);
DeviceProfile load_profile_file(const std::string& path);

/// Writes every field, with shortest round-trip number formatting.
std::string serialize_profile(const DeviceProfile& profile);

void validate(const DeviceProfile& profile);

/// Fills `eta` (from the phase-noise reference) and `c_eff` (from the
/// nominal operating point) when they are zero.
void resolve_fitted_parameters(DeviceProfile& profile,
                               const PhysicalConstants& consts = {});

/// The three fabricated designs, d1 / d2 / d3.
std::vector<DeviceProfile> builtin_profiles();

/// `d1`, `d2`, `d3` or a path to a configuration file.
DeviceProfile resolve_profile(const std::string& name_or_path);

}  // namespace rdc
