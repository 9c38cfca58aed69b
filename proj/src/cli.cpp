#include "rdc/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <optional>
#include <ostream>
#include <stdexcept>

#include "rdc/calibration.hpp"
#include "rdc/counter.hpp"
#include "rdc/csv.hpp"
#include "rdc/dse.hpp"
#include "rdc/errors.hpp"
#include "rdc/metrics.hpp"
#include "rdc/noise.hpp"
#include "rdc/oscillator.hpp"
#include "rdc/parallel.hpp"
#include "rdc/profiles.hpp"
#include "rdc/resolution.hpp"

namespace rdc::cli {

namespace {

constexpr const char* kVersion = "1.0.0";

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Context {
  std::ostream& out;
  const Manifest* replay = nullptr;  // inputs embedded in a manifest being re-run
};

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.emplace_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

std::string quote(std::string_view s) {
  std::string q = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') q += '\\';
    q += c == '\n' ? ' ' : c;
  }
  return q + '"';
}

double parse_voltage(std::string_view text) {
  double scale = 1.0;
  if (text.ends_with("mV")) {
    scale = 1e-3;
    text.remove_suffix(2);
  } else if (text.ends_with("uV")) {
    scale = 1e-6;
    text.remove_suffix(2);
  } else if (text.ends_with("V")) {
    text.remove_suffix(1);
  }
  return parse_double(text) * scale;
}

double parse_field(std::string_view text, const char* field) {
  try {
    return parse_double(text);
  } catch (const std::invalid_argument& e) {
    throw ValidationError(field, e.what());
  }
}

Range parse_range(const std::string& text, const char* field) {
  const auto parts = split(text, ':');
  if (parts.size() != 2) throw ValidationError(field, "expected lo:hi, got '" + text + "'");
  Range r{parse_field(parts[0], field), parse_field(parts[1], field)};
  if (!(r.hi >= r.lo)) throw ValidationError(field, "hi must not be below lo");
  return r;
}

/// "5", "3:20" (inclusive) or "3,5,10".
std::vector<int> parse_int_list(const std::string& text, const char* field) {
  std::vector<int> out;
  try {
    if (const auto colon = text.find(':'); colon != std::string::npos) {
      const auto lo = parse_integer(std::string_view(text).substr(0, colon));
      const auto hi = parse_integer(std::string_view(text).substr(colon + 1));
      if (hi < lo || hi - lo > 10000) throw std::invalid_argument("bad range");
      for (auto v = lo; v <= hi; ++v) out.push_back(static_cast<int>(v));
    } else {
      for (const auto& part : split(text, ',')) out.push_back(static_cast<int>(parse_integer(part)));
    }
  } catch (const std::invalid_argument& e) {
    throw ValidationError(field, "cannot parse '" + text + "': " + e.what());
  }
  return out;
}

std::vector<double> checkpoints_from(const std::string& spec) {
  try {
    return parse_checkpoints(spec);
  } catch (const std::invalid_argument& e) {
    throw ValidationError("checkpoints", e.what());
  }
}

double duration_from(const std::string& text, const char* field) {
  try {
    return parse_duration(text);
  } catch (const std::invalid_argument& e) {
    throw ValidationError(field, e.what());
  }
}

std::vector<DeviceProfile> load_profiles(const std::vector<std::string>& names, const Context& ctx) {
  std::vector<DeviceProfile> out;
  if (ctx.replay) {
    if (ctx.replay->profiles.size() != names.size()) {
      throw ValidationError("manifest", "embedded profile count does not match the arguments");
    }
    for (const auto& text : ctx.replay->profiles) out.push_back(load_profile(text));
    return out;
  }
  for (const auto& n : names) out.push_back(resolve_profile(n));
  return out;
}

std::vector<std::uint64_t> seed_list(int n) {
  if (n < 2) throw ValidationError("seeds", "need at least 2 seeds, got " + std::to_string(n));
  return default_seeds(static_cast<std::size_t>(n));
}

MonteCarloOptions mc_options(std::optional<int> counter_stages, double supply_vpp) {
  MonteCarloOptions mo;
  mo.supply_noise_vpp = supply_vpp;
  if (counter_stages) {
    CounterConfig cc;
    cc.n_stages = *counter_stages;
    validate(cc);
    mo.counter_bits = cc.width_bits();
  }
  return mo;
}

void emit(const std::string& path, const std::string& csv, Manifest m, Context& ctx) {
  write_text_file(path, csv);
  m.outputs = {path};
  write_text_file(manifest_path(path), format_manifest(m));
  ctx.out << "wrote=" << path << "\n";
}

void record_overrides(const CLI::App* sub, Manifest& m) {
  for (const CLI::Option* opt : sub->get_options()) {
    if (opt->count() == 0) continue;
    std::string name = opt->get_name(false, true);
    if (name.empty()) name = opt->get_name();
    while (!name.empty() && name.front() == '-') name.erase(name.begin());
    m.overrides[name] = join(opt->results(), ",");
  }
}

std::string seeds_text(const std::vector<std::uint64_t>& seeds) {
  std::vector<std::string> parts;
  for (auto s : seeds) parts.push_back(std::to_string(s));
  return join(parts, ",");
}

void run(const std::vector<std::string>& args, Context& ctx);

// Option bundles, one per subcommand.

struct TransferOpts {
  std::string profile = "d1", out = "curve.csv";
  int points = 200;
  std::optional<double> r_min, r_max;
};

struct JitterOpts {
  std::string profile = "d1", out = "jitter.csv";
  std::string checkpoints = "log:10us:100ms:41";
  std::string t1 = "0.1ms", t2 = "10ms";
};

struct ResolveOpts {
  std::string profile = "d1", out = "res.csv";
  int seeds = 10;
  std::string checkpoints = "log:1us:100ms:50";
  double threshold = 1.0;
  std::string supply = "0";
  std::optional<int> counter_stages;
};

struct SupplyOpts {
  std::string profile = "d2", out = "supply.csv";
  int seeds = 100;
  std::string checkpoints = "log:1us:100ms:50";
  std::string amplitudes = "0,2mV,5mV,10mV,20mV,50mV";
  std::optional<int> counter_stages;
};

struct VtOpts {
  std::string profile = "d1", out = "vt.csv";
  int seeds = 10;
  std::string checkpoints = "log:1us:100ms:50";
  std::optional<std::string> v_range;
  std::string t_range = "-20:80";
  int nv = 3, nt = 3;
  std::optional<int> counter_stages;
};

struct DseOpts {
  std::string grid, out = "best.csv";
};

struct CalibrateOpts {
  std::string profile = "d1", out = "cal.csv";
  std::string strategy = "1";
  std::string offline_points = "5";
  int trials = 500;
  std::uint64_t seed = 1;
  int test_points = 5;
  double drift_scale = 1.0, drift_offset_hz = 0.0;
  double process_spread = 0.05;
  double r_lo = 2.0e3, r_hi = 20.0e3;
};

struct FomOpts {
  std::string profiles = "d1,d2,d3", out = "table.csv";
  double tolerance_pct = 1.0;
};

struct ReproduceOpts {
  std::string figure, out_dir = ".";
  std::optional<int> seeds, trials;
};

struct RerunOpts {
  std::string manifest;
  std::optional<std::string> out;
};

void do_transfer(const TransferOpts& o, Manifest m, Context& ctx) {
  const DeviceProfile p = load_profiles({o.profile}, ctx)[0];
  if (o.points < 2) throw ValidationError("points", "need at least 2 points");
  const double lo = o.r_min.value_or(p.r_min_ohm);
  const double hi = o.r_max.value_or(p.r_max_ohm);
  if (!(lo > 0.0 && hi > lo)) throw ValidationError("r-min", "need 0 < r-min < r-max");
  if (hi > kMaxSensorOhm) throw ValidationError("r-max", "must not exceed 20 kOhm (frequency saturates)");
  const TransferCurve c =
      sample_transfer_curve(p.widlar, p.vdd_v, lo, hi, static_cast<std::size_t>(o.points), 0);
  CsvWriter w({"r_ohm", "f_hz"});
  for (std::size_t i = 0; i < c.size(); ++i) {
    w.row({format_number(c.resistances()[i]), format_number(c.frequencies()[i])});
  }
  m.profiles = {serialize_profile(p)};
  emit(o.out, w.str(), std::move(m), ctx);
  if (const auto sat = saturation_resistance(p.widlar, p.vdd_v)) {
    ctx.out << "saturation_r_ohm=" << format_number(*sat) << "\n";
  }
}

void do_jitter(const JitterOpts& o, Manifest m, Context& ctx) {
  const DeviceProfile p = load_profiles({o.profile}, ctx)[0];
  const JitterModel jm = jitter_model(p);
  const double t1 = duration_from(o.t1, "t1");
  const double t2 = duration_from(o.t2, "t2");
  if (!(t1 > 0.0 && t2 > t1)) throw ValidationError("t1", "need 0 < t1 < t2");
  CsvWriter w({"t_s", "rms_jitter_s"});
  for (double t : checkpoints_from(o.checkpoints)) {
    w.row({format_number(t), format_number(accumulated_jitter(jm, t))});
  }
  m.profiles = {serialize_profile(p)};
  emit(o.out, w.str(), std::move(m), ctx);
  ctx.out << "slope=" << format_number(jitter_slope(jm, t1, t2)) << "\n";
}

void do_resolve(const ResolveOpts& o, Manifest m, Context& ctx) {
  const DeviceProfile p = load_profiles({o.profile}, ctx)[0];
  const auto seeds = seed_list(o.seeds);
  const auto cps = checkpoints_from(o.checkpoints);
  if (!(o.threshold > 0.0)) throw ValidationError("threshold", "must be positive");
  double supply = 0.0;
  try {
    supply = parse_voltage(o.supply);
  } catch (const std::invalid_argument& e) {
    throw ValidationError("supply-noise", e.what());
  }
  const auto trace = monte_carlo(p, jitter_model(p), seeds, cps, mc_options(o.counter_stages, supply));
  const auto rc = resolution_curve(trace, o.threshold);
  CsvWriter w({"t_s", "mean_count", "sigma", "bits"});
  for (std::size_t i = 0; i < cps.size(); ++i) {
    w.row({format_number(cps[i]), format_number(trace.mean[i]), format_number(trace.sigma[i]),
           format_number(rc.points[i].bits)});
  }
  m.seeds = seeds_text(seeds);
  m.profiles = {serialize_profile(p)};
  emit(o.out, w.str(), std::move(m), ctx);
  ctx.out << "max_bits=" << format_number(rc.max_bits) << "\n";
  if (rc.saturation_time_s) ctx.out << "saturation_time_s=" << format_number(*rc.saturation_time_s) << "\n";
}

void do_supply(const SupplyOpts& o, Manifest m, Context& ctx) {
  const DeviceProfile p = load_profiles({o.profile}, ctx)[0];
  const auto seeds = seed_list(o.seeds);
  const auto cps = checkpoints_from(o.checkpoints);
  std::vector<double> amps;
  for (const auto& a : split(o.amplitudes, ',')) {
    try {
      amps.push_back(parse_voltage(a));
    } catch (const std::invalid_argument& e) {
      throw ValidationError("amplitudes", e.what());
    }
    if (!(amps.back() >= 0.0)) throw ValidationError("amplitudes", "must be nonnegative");
  }
  const auto sweep = supply_noise_sweep(p, jitter_model(p), amps, seeds, cps, mc_options(o.counter_stages, 0.0));
  CsvWriter w({"amplitude_vpp", "bits"});
  for (const auto& s : sweep) w.row({format_number(s.amplitude_vpp), format_number(s.bits)});
  m.seeds = seeds_text(seeds);
  m.profiles = {serialize_profile(p)};
  emit(o.out, w.str(), std::move(m), ctx);
}

void do_vt(const VtOpts& o, Manifest m, Context& ctx) {
  const DeviceProfile p = load_profiles({o.profile}, ctx)[0];
  const auto seeds = seed_list(o.seeds);
  const auto cps = checkpoints_from(o.checkpoints);
  const Range v = o.v_range ? parse_range(*o.v_range, "v-range") : Range{0.9 * p.vdd_v, 1.1 * p.vdd_v};
  const Range t = parse_range(o.t_range, "t-range");
  if (o.nv < 1 || o.nt < 1) throw ValidationError("nv", "grid sizes must be positive");
  const auto r = vt_sensitivity_sweep(p, jitter_model(p), v, t, o.nv, o.nt, seeds, cps,
                                      mc_options(o.counter_stages, 0.0));
  CsvWriter w({"supply_v", "temp_c", "f_o_hz", "k", "max_bits"});
  for (const auto& g : r.grid) {
    w.row({format_number(g.supply_v), format_number(g.temp_c), format_number(g.f_o_hz),
           format_number(g.k), format_number(g.max_bits)});
  }
  m.seeds = seeds_text(seeds);
  m.profiles = {serialize_profile(p)};
  emit(o.out, w.str(), std::move(m), ctx);
  ctx.out << "worst_bits=" << format_number(r.worst_bits) << "\n"
          << "best_bits=" << format_number(r.best_bits) << "\n";
}

void do_dse(const DseOpts& o, Manifest m, Context& ctx) {
  std::string text;
  if (ctx.replay) {
    text = join(ctx.replay->grid_lines, "\n") + "\n";
  } else {
    if (o.grid.empty()) throw UsageError("dse: --grid is required");
    text = read_text_file(o.grid);
  }
  const DesignGrid grid = parse_grid_csv(text);
  const DesignChoice best = argmin_cost(grid, default_thread_count());
  for (const auto& line : split(text, '\n')) {
    if (!line.empty()) m.grid_lines.push_back(line);
  }
  emit(o.out, choice_to_csv(best), std::move(m), ctx);
  ctx.out << "cost=" << format_number(best.cost) << "\n";
}

void do_calibrate(const CalibrateOpts& o, Manifest m, Context& ctx) {
  const DeviceProfile p = load_profiles({o.profile}, ctx)[0];
  const auto strategies = parse_int_list(o.strategy, "strategy");
  const auto ns = parse_int_list(o.offline_points, "offline-points");
  CsvWriter w({"n_offline", "strategy", "rms_error_pct"});
  for (int s : strategies) {
    if (s < 1 || s > 3) throw ValidationError("strategy", "must be 1, 2 or 3");
    for (int n : ns) {
      ExperimentConfig cfg;
      cfg.strategy = static_cast<Strategy>(s);
      cfg.n_offline = n;
      cfg.trials = o.trials;
      cfg.seed = o.seed;
      cfg.n_test = o.test_points;
      cfg.drift = {o.drift_scale, o.drift_offset_hz};
      cfg.process_spread = o.process_spread;
      cfg.r_lo_ohm = o.r_lo;
      cfg.r_hi_ohm = o.r_hi;
      const double err = rms_error_experiment(p, cfg);
      w.row({format_integer(n), format_integer(s), format_number(err)});
    }
  }
  m.seeds = std::to_string(o.seed);
  m.profiles = {serialize_profile(p)};
  emit(o.out, w.str(), std::move(m), ctx);
}

void do_fom(const FomOpts& o, Manifest m, Context& ctx) {
  const auto names = split(o.profiles, ',');
  const auto profiles = load_profiles(names, ctx);
  const auto reports = table_report(profiles, o.tolerance_pct);
  for (const auto& p : profiles) m.profiles.push_back(serialize_profile(p));
  emit(o.out, table_report_csv(reports), std::move(m), ctx);
  int mismatches = 0;
  for (const auto& r : reports) mismatches += r.mismatch ? 1 : 0;
  ctx.out << "mismatches=" << mismatches << "\n";
}

void do_reproduce(const ReproduceOpts& o, Context& ctx) {
  const std::string dir = o.out_dir.empty() ? "." : o.out_dir;
  auto path = [&](const std::string& name) { return dir + "/" + name; };
  const std::string seeds = std::to_string(o.seeds.value_or(10));
  const std::string id = o.figure;
  if (id == "fig9" || id == "fig10" || id == "fig11") {
    const std::string profile = id == "fig9" ? "d1" : id == "fig10" ? "d2" : "d3";
    const std::string cps = id == "fig11" ? "log:1us:300ms:55" : "log:1us:100ms:50";
    run({"resolve", "--profile", profile, "--seeds", seeds, "--checkpoints", cps, "--out",
         path(id + ".csv")},
        ctx);
  } else if (id == "fig12") {
    for (const char* p : {"d1", "d2", "d3"}) {
      ctx.out << "profile=" << p << "\n";
      run({"jitter", "--profile", p, "--out", path(std::string("fig12_") + p + ".csv")}, ctx);
    }
  } else if (id == "fig15") {
    const std::string trials = std::to_string(o.trials.value_or(500));
    run({"calibrate", "--profile", "d1", "--strategy", "1", "--offline-points", "3:20", "--trials",
         trials, "--out", path("fig15_offline.csv")},
        ctx);
    run({"calibrate", "--profile", "d1", "--strategy", "1,2,3", "--offline-points", "3:20",
         "--trials", trials, "--drift-scale", "1.02", "--drift-offset-hz", "50e3", "--out",
         path("fig15_drift.csv")},
        ctx);
  } else if (id == "fig16") {
    const std::string s = std::to_string(o.seeds.value_or(100));
    for (const char* p : {"d2", "d3"}) {
      run({"supply-noise", "--profile", p, "--seeds", s, "--out", path(std::string("fig16_") + p + ".csv")},
          ctx);
    }
  } else if (id == "table1") {
    run({"fom", "--profiles", "d1,d2,d3", "--out", path("table1.csv")}, ctx);
  }
}

void do_rerun(const RerunOpts& o, Context& ctx) {
  const Manifest m = parse_manifest(read_text_file(o.manifest));
  if (m.args.empty()) throw ValidationError("manifest", "no recorded arguments");
  if (m.args.front() == "rerun" || m.args.front() == "reproduce") {
    throw ValidationError("manifest", "cannot re-run '" + m.args.front() + "'");
  }
  std::vector<std::string> args = m.args;
  if (o.out) {
    bool replaced = false;
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (args[i] == "--out" && i + 1 < args.size()) {
        args[i + 1] = *o.out;
        replaced = true;
      } else if (args[i].starts_with("--out=")) {
        args[i] = "--out=" + *o.out;
        replaced = true;
      }
    }
    if (!replaced) {
      args.push_back("--out");
      args.push_back(*o.out);
    }
  }
  Context inner{ctx.out, &m};
  run(args, inner);
}

void run(const std::vector<std::string>& args, Context& ctx) {
  CLI::App app{"Behavioral simulator for ring-oscillator resistance-to-digital converters", "rdc-sim"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  auto profile_opt = [](CLI::App* s, std::string& target) {
    s->add_option("--profile", target, "Built-in profile (d1, d2, d3) or config file")->capture_default_str();
  };

  TransferOpts tr;
  auto* s_tr = app.add_subcommand("transfer", "Resistance-to-frequency transfer curve");
  profile_opt(s_tr, tr.profile);
  s_tr->add_option("--points", tr.points, "Log-uniform sample count")->capture_default_str();
  s_tr->add_option("--r-min", tr.r_min, "Lower resistance (default: profile range)");
  s_tr->add_option("--r-max", tr.r_max, "Upper resistance (default: profile range)");
  s_tr->add_option("--out", tr.out)->capture_default_str();

  JitterOpts jt;
  auto* s_jt = app.add_subcommand("jitter", "Accumulated rms jitter versus time");
  profile_opt(s_jt, jt.profile);
  s_jt->add_option("--checkpoints", jt.checkpoints)->capture_default_str();
  s_jt->add_option("--t1", jt.t1, "Secant start")->capture_default_str();
  s_jt->add_option("--t2", jt.t2, "Secant end")->capture_default_str();
  s_jt->add_option("--out", jt.out)->capture_default_str();

  ResolveOpts rs;
  auto* s_rs = app.add_subcommand("resolve", "Monte-Carlo counter readout and effective bits");
  profile_opt(s_rs, rs.profile);
  s_rs->add_option("--seeds", rs.seeds, "Number of seeds (1..n)")->capture_default_str();
  s_rs->add_option("--checkpoints", rs.checkpoints)->capture_default_str();
  s_rs->add_option("--threshold", rs.threshold, "Saturation sigma in counts")->capture_default_str();
  s_rs->add_option("--supply-noise", rs.supply, "Supply ripple, peak to peak (V, mV, uV)")->capture_default_str();
  s_rs->add_option("--counter-stages", rs.counter_stages, "Counter stages, 4 bits each");
  s_rs->add_option("--out", rs.out)->capture_default_str();

  SupplyOpts sp;
  auto* s_sp = app.add_subcommand("supply-noise", "Effective bits versus supply ripple amplitude");
  profile_opt(s_sp, sp.profile);
  s_sp->add_option("--seeds", sp.seeds)->capture_default_str();
  s_sp->add_option("--checkpoints", sp.checkpoints)->capture_default_str();
  s_sp->add_option("--amplitudes", sp.amplitudes)->capture_default_str();
  s_sp->add_option("--counter-stages", sp.counter_stages);
  s_sp->add_option("--out", sp.out)->capture_default_str();

  VtOpts vt;
  auto* s_vt = app.add_subcommand("vt-sweep", "Effective bits over supply and temperature");
  profile_opt(s_vt, vt.profile);
  s_vt->add_option("--seeds", vt.seeds)->capture_default_str();
  s_vt->add_option("--checkpoints", vt.checkpoints)->capture_default_str();
  s_vt->add_option("--v-range", vt.v_range, "lo:hi volts (default: V_DD +/- 10%)");
  s_vt->add_option("--t-range", vt.t_range, "lo:hi Celsius")->capture_default_str();
  s_vt->add_option("--nv", vt.nv)->capture_default_str();
  s_vt->add_option("--nt", vt.nt)->capture_default_str();
  s_vt->add_option("--counter-stages", vt.counter_stages);
  s_vt->add_option("--out", vt.out)->capture_default_str();

  DseOpts ds;
  auto* s_ds = app.add_subcommand("dse", "Pick the lowest-cost design from a grid");
  s_ds->add_option("--grid", ds.grid, "CSV: latch_wl,dro_wl,power_w,freq_hz,pn_dbc");
  s_ds->add_option("--out", ds.out)->capture_default_str();

  CalibrateOpts cb;
  auto* s_cb = app.add_subcommand("calibrate", "Calibration-strategy rms error experiment");
  profile_opt(s_cb, cb.profile);
  s_cb->add_option("--strategy", cb.strategy, "1, 2, 3 or a comma list")->capture_default_str();
  s_cb->add_option("--offline-points", cb.offline_points, "n, lo:hi or a comma list")->capture_default_str();
  s_cb->add_option("--trials", cb.trials)->capture_default_str();
  s_cb->add_option("--seed", cb.seed)->capture_default_str();
  s_cb->add_option("--test-points", cb.test_points)->capture_default_str();
  s_cb->add_option("--drift-scale", cb.drift_scale)->capture_default_str();
  s_cb->add_option("--drift-offset-hz", cb.drift_offset_hz)->capture_default_str();
  s_cb->add_option("--process-spread", cb.process_spread)->capture_default_str();
  s_cb->add_option("--r-lo", cb.r_lo)->capture_default_str();
  s_cb->add_option("--r-hi", cb.r_hi)->capture_default_str();
  s_cb->add_option("--out", cb.out)->capture_default_str();

  FomOpts fm;
  auto* s_fm = app.add_subcommand("fom", "Energy and figure-of-merit table");
  s_fm->add_option("--profiles", fm.profiles, "Comma-separated profiles")->capture_default_str();
  s_fm->add_option("--tolerance-pct", fm.tolerance_pct)->capture_default_str();
  s_fm->add_option("--out", fm.out)->capture_default_str();

  ReproduceOpts rp;
  auto* s_rp = app.add_subcommand("reproduce", "Regenerate one of the published figures or the table");
  s_rp->add_option("figure", rp.figure)
      ->required()
      ->check(CLI::IsMember({"fig9", "fig10", "fig11", "fig12", "fig15", "fig16", "table1"}));
  s_rp->add_option("--out-dir", rp.out_dir)->capture_default_str();
  s_rp->add_option("--seeds", rp.seeds);
  s_rp->add_option("--trials", rp.trials);

  RerunOpts rr;
  auto* s_rr = app.add_subcommand("rerun", "Repeat the run recorded in a manifest");
  s_rr->add_option("--manifest", rr.manifest)->required();
  s_rr->add_option("--out", rr.out, "Write to a different path");

  std::vector<std::string> store = {"rdc-sim"};
  store.insert(store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : store) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, ctx.out, ctx.out);
      return;
    }
    throw UsageError(e.what());
  }

  CLI::App* sub = app.get_subcommands().front();
  Manifest m;
  m.subcommand = sub->get_name();
  m.args = args;
  record_overrides(sub, m);

  if (sub == s_tr) do_transfer(tr, std::move(m), ctx);
  else if (sub == s_jt) do_jitter(jt, std::move(m), ctx);
  else if (sub == s_rs) do_resolve(rs, std::move(m), ctx);
  else if (sub == s_sp) do_supply(sp, std::move(m), ctx);
  else if (sub == s_vt) do_vt(vt, std::move(m), ctx);
  else if (sub == s_ds) do_dse(ds, std::move(m), ctx);
  else if (sub == s_cb) do_calibrate(cb, std::move(m), ctx);
  else if (sub == s_fm) do_fom(fm, std::move(m), ctx);
  else if (sub == s_rp) do_reproduce(rp, ctx);
  else if (sub == s_rr) do_rerun(rr, ctx);
}

}  // namespace

std::string manifest_path(const std::string& output_path) { return output_path + ".manifest"; }

std::string format_manifest(const Manifest& m) {
  std::string s = "# rdc-sim run manifest\n";
  s += "version = " + std::string(kVersion) + "\n";
  s += "subcommand = " + m.subcommand + "\n";
  for (const auto& a : m.args) s += "arg = " + a + "\n";
  for (const auto& o : m.outputs) s += "output = " + o + "\n";
  for (const auto& [k, v] : m.overrides) s += "override." + k + " = " + v + "\n";
  if (!m.seeds.empty()) s += "seeds = " + m.seeds + "\n";
  for (std::size_t i = 0; i < m.profiles.size(); ++i) {
    for (const auto& line : split(m.profiles[i], '\n')) {
      if (!line.empty()) s += "profile." + std::to_string(i) + "." + line + "\n";
    }
  }
  for (const auto& g : m.grid_lines) s += "grid = " + g + "\n";
  return s;
}

Manifest parse_manifest(const std::string& text) {
  Manifest m;
  int line_no = 0;
  for (auto line : split(text, '\n')) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find(" = ");
    if (eq == std::string::npos) throw ConfigError(line_no, "expected 'key = value'");
    const std::string key = line.substr(0, eq);
    const std::string value = line.substr(eq + 3);
    if (key == "version") {
      continue;
    } else if (key == "subcommand") {
      m.subcommand = value;
    } else if (key == "arg") {
      m.args.push_back(value);
    } else if (key == "output") {
      m.outputs.push_back(value);
    } else if (key == "seeds") {
      m.seeds = value;
    } else if (key == "grid") {
      m.grid_lines.push_back(value);
    } else if (key.starts_with("override.")) {
      m.overrides[key.substr(9)] = value;
    } else if (key.starts_with("profile.")) {
      const auto dot = key.find('.', 8);
      if (dot == std::string::npos) throw ConfigError(line_no, "malformed profile key");
      std::size_t index = 0;
      try {
        index = static_cast<std::size_t>(parse_integer(std::string_view(key).substr(8, dot - 8)));
      } catch (const std::invalid_argument&) {
        throw ConfigError(line_no, "malformed profile index");
      }
      if (index > m.profiles.size()) throw ConfigError(line_no, "profile index out of order");
      if (index == m.profiles.size()) m.profiles.emplace_back();
      m.profiles[index] += key.substr(dot + 1) + " = " + value + "\n";
    } else {
      throw ConfigError(line_no, "unknown manifest key '" + key + "'");
    }
  }
  return m;
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Context ctx{out, nullptr};
  try {
    run(args, ctx);
    return kExitOk;
  } catch (const UsageError& e) {
    err << "error kind=usage message=" << quote(e.what()) << "\n";
    return kExitUsage;
  } catch (const ConfigError& e) {
    err << "error kind=config line=" << e.line() << " message=" << quote(e.what()) << "\n";
  } catch (const ValidationError& e) {
    err << "error kind=validation field=" << e.field() << " message=" << quote(e.what()) << "\n";
  } catch (const OverflowError& e) {
    err << "error kind=overflow count=" << e.count() << " width_bits=" << e.width_bits()
        << " required_bits=" << e.required_bits() << " message=" << quote(e.what()) << "\n";
  } catch (const Error& e) {
    err << "error kind=" << e.kind() << " message=" << quote(e.what()) << "\n";
  } catch (const std::exception& e) {
    err << "error kind=runtime message=" << quote(e.what()) << "\n";
  }
  return kExitFailure;
}

}  // namespace rdc::cli
