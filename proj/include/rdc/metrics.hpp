#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rdc/profiles.hpp"

namespace rdc {

double energy_per_readout(double p_active_w, double t_meas_s);

/// Duty-cycled power p * t_meas / period. Throws DomainError when
/// t_meas > period or either is not positive.
double avg_power(double p_active_w, double t_meas_s, double period_s);

/// Energy per conversion step, energy / 2^bits.
double fom_energy_per_cs(double energy_j, double bits);

/// 20 log10(span / error).
double dynamic_range_db(double count_span, double count_error_rms);

struct FomReport {
  std::string profile;
  double active_power_w = 0.0;
  double avg_power_w = 0.0;
  double energy_per_readout_j = 0.0;
  double bits = 0.0;
  double fom_j_per_cs = 0.0;
  double dynamic_range_db = 0.0;   // from the model, see fom_report
  std::optional<TableReference> reference;
  double energy_delta_pct = 0.0;   // derived vs reference
  double fom_delta_pct = 0.0;
  bool mismatch = false;           // any delta beyond the tolerance
};

/// Derived columns for one profile. Bits come from the profile's reference
/// resolution. The model dynamic range uses the count span over the sensor
/// range at the readout time against the rms count error
/// sqrt(1/12 + (f_o k T_meas)^2).
FomReport fom_report(const DeviceProfile& profile, double tolerance_pct = 1.0);

std::vector<FomReport> table_report(const std::vector<DeviceProfile>& profiles,
                                    double tolerance_pct = 1.0);

std::string table_report_csv(const std::vector<FomReport>& reports);

}  // namespace rdc
