#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "rdc/noise.hpp"
#include "rdc/profiles.hpp"

namespace rdc {

/// Scaled quantization error with jitter: (T + k t_meas) / t_meas.
double sqej(double period_s, double k, double t_meas_s);

/// log2(1 / sqej). Tends to log2(1/k) as t_meas grows.
double analytic_bits(double period_s, double k, double t_meas_s);

/// log2(1/k); infinite for k = 0.
double analytic_bits_asymptote(double k);

/// log2(N) for the largest count before the seeds disagree. N >= 1.
double max_bits_from_count(std::uint64_t max_count);

/// Per-seed counter values at each checkpoint with cross-seed statistics.
struct ReadoutTrace {
  std::vector<double> checkpoints_s;
  std::vector<std::uint64_t> seeds;
  std::vector<std::vector<std::uint64_t>> counts;  // [seed][checkpoint]
  std::vector<double> mean;
  std::vector<double> sigma;  // sample standard deviation (n - 1)
};

/// Builds a trace and its statistics from raw counts; rows must share
/// the checkpoint count.
ReadoutTrace make_trace(std::vector<double> checkpoints_s, std::vector<std::uint64_t> seeds,
                        std::vector<std::vector<std::uint64_t>> counts);

struct ResolutionPoint {
  double t_s = 0.0;
  double bits = 0.0;
};

struct ResolutionCurve {
  std::vector<ResolutionPoint> points;
  std::optional<double> saturation_time_s;  // first checkpoint with sigma >= threshold
  double max_bits = 0.0;
};

struct MonteCarloOptions {
  unsigned threads = 0;            // 0: RDC_SIM_THREADS or hardware concurrency
  double supply_noise_vpp = 0.0;   // peak-to-peak supply ripple
  int counter_bits = 0;            // 0: the profile's counter width
};

/// Transient Monte-Carlo of the gated counter. For seed s and checkpoint t
/// the count is floor((f_o + df) * (t + e_s(t)) + phase0), where e_s is the
/// seed's timing-error path and df is the supply-induced frequency offset
/// for that gate, uniform in +/- pushing * A / 2. Counts never decrease
/// along a row. Results do not depend on the worker count.
ReadoutTrace monte_carlo(const DeviceProfile& profile, const JitterModel& jm,
                         std::span<const std::uint64_t> seeds,
                         std::span<const double> checkpoints_s, const MonteCarloOptions& opts = {});

/// Effective bits log2(mean / max(1, sigma)) per checkpoint.
ResolutionCurve resolution_curve(const ReadoutTrace& trace, double sigma_threshold = 1.0);

struct SupplyNoisePoint {
  double amplitude_vpp = 0.0;
  double bits = 0.0;
};

/// Re-runs the Monte-Carlo for each ripple amplitude with the same seeds
/// and reports the maximum effective bits.
std::vector<SupplyNoisePoint> supply_noise_sweep(const DeviceProfile& profile,
                                                 const JitterModel& jm,
                                                 std::span<const double> amplitudes_vpp,
                                                 std::span<const std::uint64_t> seeds,
                                                 std::span<const double> checkpoints_s,
                                                 const MonteCarloOptions& opts = {});

struct VtPoint {
  double supply_v = 0.0;
  double temp_c = 0.0;
  double f_o_hz = 0.0;
  double k = 0.0;
  double max_bits = 0.0;
};

struct VtSweepResult {
  std::vector<VtPoint> grid;
  double worst_bits = 0.0;
  double best_bits = 0.0;
};

struct Range {
  double lo = 0.0;
  double hi = 0.0;
};

/// Profile moved to supply v and temperature t (Celsius): f_o shifts by
/// pushing * dV + temp_coeff * dT, k scales by (1 + k_per_v dV + k_per_k dT)
/// clamped at zero.
DeviceProfile at_operating_point(const DeviceProfile& profile, double supply_v, double temp_c);

/// Max effective bits over an nv x nt grid spanning the ranges. An axis
/// with one point sits at the nominal value.
VtSweepResult vt_sensitivity_sweep(const DeviceProfile& profile, const JitterModel& jm,
                                   Range v_range, Range t_range_c, int nv, int nt,
                                   std::span<const std::uint64_t> seeds,
                                   std::span<const double> checkpoints_s,
                                   const MonteCarloOptions& opts = {});

/// Seeds 1..n.
std::vector<std::uint64_t> default_seeds(std::size_t n);

/// `10ms`, `1us`, `2.5e-3`, `1s`, `500ns`.
double parse_duration(std::string_view text);

/// `log:1us:100ms:50`, `lin:1ms:10ms:10`, or a comma list of durations.
std::vector<double> parse_checkpoints(std::string_view spec);

}  // namespace rdc
