#include "rdc/resolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "rdc/counter.hpp"
#include "rdc/csv.hpp"
#include "rdc/errors.hpp"
#include "rdc/parallel.hpp"
#include "rdc/rng.hpp"

namespace rdc {

namespace {

// Stream 1 of a seed drives the supply ripple (stream 0 is the jitter path).
constexpr std::uint64_t kSupplyStream = 1;

void check_seeds_and_checkpoints(std::span<const std::uint64_t> seeds,
                                 std::span<const double> checkpoints_s) {
  if (seeds.size() < 2) {
    throw ValidationError("seeds", "need at least 2 seeds, got " + std::to_string(seeds.size()));
  }
  if (checkpoints_s.empty()) throw ValidationError("checkpoints", "need at least one checkpoint");
  for (std::size_t j = 0; j < checkpoints_s.size(); ++j) {
    if (!(checkpoints_s[j] > 0.0)) throw ValidationError("checkpoints", "must be positive");
    if (j > 0 && !(checkpoints_s[j] > checkpoints_s[j - 1])) {
      throw ValidationError("checkpoints", "must be strictly increasing");
    }
  }
}

}  // namespace

double sqej(double period_s, double k, double t_meas_s) {
  if (!(period_s > 0.0) || !(t_meas_s > 0.0) || !(k >= 0.0)) {
    throw DomainError("sqej needs T > 0, t_meas > 0, k >= 0");
  }
  return (period_s + k * t_meas_s) / t_meas_s;
}

double analytic_bits(double period_s, double k, double t_meas_s) {
  return -std::log2(sqej(period_s, k, t_meas_s));
}

double analytic_bits_asymptote(double k) {
  if (!(k >= 0.0)) throw DomainError("k must be nonnegative");
  return k == 0.0 ? std::numeric_limits<double>::infinity() : -std::log2(k);
}

double max_bits_from_count(std::uint64_t max_count) {
  if (max_count == 0) throw DomainError("maximum count must be at least 1");
  return std::log2(static_cast<double>(max_count));
}

ReadoutTrace make_trace(std::vector<double> checkpoints_s, std::vector<std::uint64_t> seeds,
                        std::vector<std::vector<std::uint64_t>> counts) {
  ReadoutTrace trace;
  trace.checkpoints_s = std::move(checkpoints_s);
  trace.seeds = std::move(seeds);
  trace.counts = std::move(counts);
  const std::size_t m = trace.checkpoints_s.size();
  const std::size_t n = trace.counts.size();
  for (const auto& row : trace.counts) {
    if (row.size() != m) throw ValidationError("counts", "row length differs from checkpoint count");
  }
  trace.mean.assign(m, 0.0);
  trace.sigma.assign(m, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    double sum = 0.0;
    for (std::size_t s = 0; s < n; ++s) sum += static_cast<double>(trace.counts[s][j]);
    const double mean = n ? sum / static_cast<double>(n) : 0.0;
    double ss = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
      const double d = static_cast<double>(trace.counts[s][j]) - mean;
      ss += d * d;
    }
    trace.mean[j] = mean;
    trace.sigma[j] = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;
  }
  return trace;
}

ReadoutTrace monte_carlo(const DeviceProfile& profile, const JitterModel& jm,
                         std::span<const std::uint64_t> seeds,
                         std::span<const double> checkpoints_s, const MonteCarloOptions& opts) {
  check_seeds_and_checkpoints(seeds, checkpoints_s);
  if (!(opts.supply_noise_vpp >= 0.0)) {
    throw ValidationError("supply_noise_vpp", "amplitude must be nonnegative");
  }
  const int width = opts.counter_bits > 0 ? opts.counter_bits : profile.counter_bits;
  const double half_swing_hz = profile.supply_pushing_hz_per_v * opts.supply_noise_vpp / 2.0;
  const double phase0 = profile.phase0_cycles;

  std::vector<std::vector<std::uint64_t>> counts(seeds.size());
  parallel_for(seeds.size(), opts.threads, [&](std::size_t s) {
    const auto eps = sample_timing_path(jm, checkpoints_s, seeds[s]);
    Rng supply(derive_seed(seeds[s], kSupplyStream));
    auto& row = counts[s];
    row.resize(checkpoints_s.size());
    std::uint64_t prev = 0;
    for (std::size_t j = 0; j < checkpoints_s.size(); ++j) {
      const double df = half_swing_hz * (2.0 * supply.uniform() - 1.0);
      const double f = profile.f_o_hz + df;
      const double gate = std::max(0.0, checkpoints_s[j] + eps[j]);
      const std::uint64_t c = gated_count(f, gate, phase0, width);
      prev = std::max(prev, c);
      row[j] = prev;
    }
  });
  return make_trace({checkpoints_s.begin(), checkpoints_s.end()}, {seeds.begin(), seeds.end()},
                    std::move(counts));
}

ResolutionCurve resolution_curve(const ReadoutTrace& trace, double sigma_threshold) {
  ResolutionCurve curve;
  curve.points.reserve(trace.checkpoints_s.size());
  curve.max_bits = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < trace.checkpoints_s.size(); ++j) {
    const double mean = std::max(1.0, trace.mean[j]);
    const double bits = std::log2(mean / std::max(1.0, trace.sigma[j]));
    curve.points.push_back({trace.checkpoints_s[j], bits});
    curve.max_bits = std::max(curve.max_bits, bits);
    if (!curve.saturation_time_s && trace.sigma[j] >= sigma_threshold) {
      curve.saturation_time_s = trace.checkpoints_s[j];
    }
  }
  if (curve.points.empty()) curve.max_bits = 0.0;
  return curve;
}

std::vector<SupplyNoisePoint> supply_noise_sweep(const DeviceProfile& profile,
                                                 const JitterModel& jm,
                                                 std::span<const double> amplitudes_vpp,
                                                 std::span<const std::uint64_t> seeds,
                                                 std::span<const double> checkpoints_s,
                                                 const MonteCarloOptions& opts) {
  std::vector<SupplyNoisePoint> out;
  out.reserve(amplitudes_vpp.size());
  for (double a : amplitudes_vpp) {
    if (!(a >= 0.0)) throw ValidationError("amplitudes", "must be nonnegative");
    MonteCarloOptions o = opts;
    o.supply_noise_vpp = a;
    const auto trace = monte_carlo(profile, jm, seeds, checkpoints_s, o);
    out.push_back({a, resolution_curve(trace).max_bits});
  }
  return out;
}

DeviceProfile at_operating_point(const DeviceProfile& profile, double supply_v, double temp_c) {
  const double v_nom = profile.vt.v_nominal_v > 0.0 ? profile.vt.v_nominal_v : profile.vdd_v;
  const double dv = supply_v - v_nom;
  const double dt = temp_c - profile.vt.t_nominal_c;
  DeviceProfile p = profile;
  p.vdd_v = supply_v;
  p.f_o_hz = profile.f_o_hz + profile.supply_pushing_hz_per_v * dv + profile.temp_coeff_hz_per_k * dt;
  if (!(p.f_o_hz > 0.0)) {
    throw ValidationError("vt", "operating point drives the oscillation frequency to zero");
  }
  const double scale = 1.0 + profile.vt.k_per_v * dv + profile.vt.k_per_k * dt;
  p.jitter_slope = profile.jitter_slope * std::max(0.0, scale);
  return p;
}

VtSweepResult vt_sensitivity_sweep(const DeviceProfile& profile, const JitterModel& jm,
                                   Range v_range, Range t_range_c, int nv, int nt,
                                   std::span<const std::uint64_t> seeds,
                                   std::span<const double> checkpoints_s,
                                   const MonteCarloOptions& opts) {
  if (nv < 1 || nt < 1) throw ValidationError("grid", "need at least one point per axis");
  if (!(v_range.hi >= v_range.lo) || !(t_range_c.hi >= t_range_c.lo)) {
    throw ValidationError("range", "ranges must be nonempty (lo <= hi)");
  }
  const double v_nom = profile.vt.v_nominal_v > 0.0 ? profile.vt.v_nominal_v : profile.vdd_v;
  auto axis = [](Range r, int n, double nominal) {
    std::vector<double> v(static_cast<std::size_t>(n));
    if (n == 1) {
      v[0] = nominal;
      return v;
    }
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = r.lo + (r.hi - r.lo) * i / (n - 1);
    return v;
  };
  const auto vs = axis(v_range, nv, v_nom);
  const auto ts = axis(t_range_c, nt, profile.vt.t_nominal_c);

  VtSweepResult result;
  result.worst_bits = std::numeric_limits<double>::infinity();
  result.best_bits = -std::numeric_limits<double>::infinity();
  for (double v : vs) {
    for (double t : ts) {
      const DeviceProfile p = at_operating_point(profile, v, t);
      JitterModel model = jm;
      model.k = jm.k * (profile.jitter_slope > 0.0 ? p.jitter_slope / profile.jitter_slope : 1.0);
      const auto trace = monte_carlo(p, model, seeds, checkpoints_s, opts);
      const double bits = resolution_curve(trace).max_bits;
      result.grid.push_back({v, t, p.f_o_hz, model.k, bits});
      result.worst_bits = std::min(result.worst_bits, bits);
      result.best_bits = std::max(result.best_bits, bits);
    }
  }
  return result;
}

std::vector<std::uint64_t> default_seeds(std::size_t n) {
  std::vector<std::uint64_t> s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = i + 1;
  return s;
}

double parse_duration(std::string_view text) {
  struct Unit {
    std::string_view suffix;
    double scale;
  };
  static constexpr Unit kUnits[] = {{"ns", 1e-9}, {"us", 1e-6}, {"ms", 1e-3}, {"s", 1.0}};
  for (const auto& u : kUnits) {
    if (text.size() > u.suffix.size() && text.ends_with(u.suffix)) {
      const auto number = text.substr(0, text.size() - u.suffix.size());
      // "1e-3s" style plain seconds also end in "s"; only strip when the rest parses.
      try {
        return parse_double(number) * u.scale;
      } catch (const std::invalid_argument&) {
        continue;
      }
    }
  }
  try {
    return parse_double(text);
  } catch (const std::invalid_argument&) {
    throw ValidationError("duration", "cannot parse '" + std::string(text) + "'");
  }
}

std::vector<double> parse_checkpoints(std::string_view spec) {
  auto split = [](std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    while (true) {
      auto p = s.find(sep);
      parts.push_back(s.substr(0, p));
      if (p == std::string_view::npos) break;
      s = s.substr(p + 1);
    }
    return parts;
  };
  std::vector<double> out;
  if (spec.starts_with("log:") || spec.starts_with("lin:")) {
    const auto parts = split(spec, ':');
    if (parts.size() != 4) {
      throw ValidationError("checkpoints", "expected kind:start:stop:count, got '" + std::string(spec) + "'");
    }
    const double a = parse_duration(parts[1]);
    const double b = parse_duration(parts[2]);
    std::int64_t n = 0;
    try {
      n = parse_integer(parts[3]);
    } catch (const std::invalid_argument&) {
      throw ValidationError("checkpoints", "bad count '" + std::string(parts[3]) + "'");
    }
    if (n < 1 || !(a > 0.0) || !(b >= a)) {
      throw ValidationError("checkpoints", "need count >= 1 and 0 < start <= stop");
    }
    const bool log = parts[0] == "log";
    for (std::int64_t i = 0; i < n; ++i) {
      if (n == 1) {
        out.push_back(a);
        break;
      }
      const double u = static_cast<double>(i) / static_cast<double>(n - 1);
      double t = log ? std::exp(std::log(a) + u * (std::log(b) - std::log(a))) : a + u * (b - a);
      if (i == 0) t = a;
      if (i == n - 1) t = b;
      out.push_back(t);
    }
  } else {
    for (auto part : split(spec, ',')) out.push_back(parse_duration(part));
  }
  for (std::size_t j = 0; j < out.size(); ++j) {
    if (!(out[j] > 0.0) || (j > 0 && !(out[j] > out[j - 1]))) {
      throw ValidationError("checkpoints", "must be positive and strictly increasing");
    }
  }
  return out;
}

}  // namespace rdc
