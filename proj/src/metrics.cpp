#include "rdc/metrics.hpp"

#include <cmath>

#include "rdc/csv.hpp"
#include "rdc/errors.hpp"
#include "rdc/oscillator.hpp"

namespace rdc {

double energy_per_readout(double p_active_w, double t_meas_s) {
  if (!(p_active_w >= 0.0) || !(t_meas_s >= 0.0)) throw DomainError("power and time must be nonnegative");
  return p_active_w * t_meas_s;
}

double avg_power(double p_active_w, double t_meas_s, double period_s) {
  if (!(t_meas_s > 0.0) || !(period_s > 0.0)) throw DomainError("times must be positive");
  if (t_meas_s > period_s) throw DomainError("readout time exceeds the readout period");
  return p_active_w * t_meas_s / period_s;
}

double fom_energy_per_cs(double energy_j, double bits) {
  if (!(energy_j >= 0.0)) throw DomainError("energy must be nonnegative");
  return energy_j * std::exp2(-bits);
}

double dynamic_range_db(double count_span, double count_error_rms) {
  if (!(count_span > 0.0) || !(count_error_rms > 0.0)) throw DomainError("span and error must be positive");
  return 20.0 * std::log10(count_span / count_error_rms);
}

namespace {

double delta_pct(double derived, double reference) {
  if (reference == 0.0) return 0.0;
  return 100.0 * (derived - reference) / reference;
}

}  // namespace

FomReport fom_report(const DeviceProfile& profile, double tolerance_pct) {
  FomReport r;
  r.profile = profile.name;
  r.active_power_w = profile.active_power_w;
  r.avg_power_w = avg_power(profile.active_power_w, profile.t_meas_s, profile.readout_period_s);
  r.energy_per_readout_j = energy_per_readout(profile.active_power_w, profile.t_meas_s);
  r.reference = profile.reference;
  r.bits = profile.reference ? profile.reference->resolution_bits : 0.0;
  r.fom_j_per_cs = fom_energy_per_cs(r.energy_per_readout_j, r.bits);

  const TransferCurve curve = transfer_curve(profile, 2);
  const double span = (curve.f_max() - curve.f_min()) * profile.t_meas_s;
  const double jitter_counts = profile.f_o_hz * profile.jitter_slope * profile.t_meas_s;
  r.dynamic_range_db = dynamic_range_db(span, std::sqrt(1.0 / 12.0 + jitter_counts * jitter_counts));

  if (r.reference) {
    r.energy_delta_pct = delta_pct(r.energy_per_readout_j, r.reference->energy_j);
    r.fom_delta_pct = delta_pct(r.fom_j_per_cs, r.reference->fom_j_per_cs);
    r.mismatch = std::fabs(r.energy_delta_pct) > tolerance_pct ||
                 std::fabs(r.fom_delta_pct) > tolerance_pct;
  }
  return r;
}

std::vector<FomReport> table_report(const std::vector<DeviceProfile>& profiles,
                                    double tolerance_pct) {
  std::vector<FomReport> out;
  out.reserve(profiles.size());
  for (const auto& p : profiles) out.push_back(fom_report(p, tolerance_pct));
  return out;
}

std::string table_report_csv(const std::vector<FomReport>& reports) {
  CsvWriter w({"profile", "active_power_w", "resolution_bits", "avg_power_w", "energy_j",
               "energy_ref_j", "energy_delta_pct", "fom_j_per_cs", "fom_ref_j_per_cs",
               "fom_delta_pct", "dynamic_range_db", "dynamic_range_ref_db", "mismatch"});
  for (const auto& r : reports) {
    const bool ref = r.reference.has_value();
    w.row({r.profile, format_number(r.active_power_w), format_number(r.bits),
           format_number(r.avg_power_w), format_number(r.energy_per_readout_j),
           ref ? format_number(r.reference->energy_j) : "", format_number(r.energy_delta_pct),
           format_number(r.fom_j_per_cs), ref ? format_number(r.reference->fom_j_per_cs) : "",
           format_number(r.fom_delta_pct), format_number(r.dynamic_range_db),
           ref ? format_number(r.reference->dynamic_range_db) : "", r.mismatch ? "1" : "0"});
  }
  return w.str();
}

}  // namespace rdc
