#include "rdc/profiles.hpp"

#include <cmath>
#include <functional>
#include <set>
#include <string>

#include "rdc/csv.hpp"
#include "rdc/errors.hpp"
#include "rdc/noise.hpp"
#include "rdc/oscillator.hpp"

namespace rdc {

namespace {

enum class FieldType { real, integer, text, regime };

struct Field {
  std::string_view key;
  FieldType type;
  std::function<double&(DeviceProfile&)> real;
  std::function<int&(DeviceProfile&)> integer;
};

Field real(std::string_view key, std::function<double&(DeviceProfile&)> f) {
  return {key, FieldType::real, std::move(f), {}};
}

Field integer(std::string_view key, std::function<int&(DeviceProfile&)> f) {
  return {key, FieldType::integer, {}, std::move(f)};
}

TableReference& ref(DeviceProfile& p) {
  if (!p.reference) p.reference.emplace();
  return *p.reference;
}

// Serialization order follows this table.
const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      {"name", FieldType::text, {}, {}},
      real("technology.node_m", [](DeviceProfile& p) -> double& { return p.technology_node_m; }),
      real("supply.vdd_v", [](DeviceProfile& p) -> double& { return p.vdd_v; }),
      real("supply.pushing_hz_per_v", [](DeviceProfile& p) -> double& { return p.supply_pushing_hz_per_v; }),
      real("thermal.temp_coeff_hz_per_k", [](DeviceProfile& p) -> double& { return p.temp_coeff_hz_per_k; }),
      real("oscillator.f_o_hz", [](DeviceProfile& p) -> double& { return p.f_o_hz; }),
      real("power.active_w", [](DeviceProfile& p) -> double& { return p.active_power_w; }),
      real("phase_noise.offset_hz", [](DeviceProfile& p) -> double& { return p.phase_noise_ref.offset_hz; }),
      real("phase_noise.l_dbc", [](DeviceProfile& p) -> double& { return p.phase_noise_ref.l_dbc_per_hz; }),
      real("jitter.k", [](DeviceProfile& p) -> double& { return p.jitter_slope; }),
      real("jitter.a", [](DeviceProfile& p) -> double& { return p.white_jitter_coeff; }),
      real("readout.t_meas_s", [](DeviceProfile& p) -> double& { return p.t_meas_s; }),
      real("readout.period_s", [](DeviceProfile& p) -> double& { return p.readout_period_s; }),
      real("readout.phase0_cycles", [](DeviceProfile& p) -> double& { return p.phase0_cycles; }),
      integer("counter.bits", [](DeviceProfile& p) -> int& { return p.counter_bits; }),
      real("sensor.r_min_ohm", [](DeviceProfile& p) -> double& { return p.r_min_ohm; }),
      real("sensor.r_max_ohm", [](DeviceProfile& p) -> double& { return p.r_max_ohm; }),
      real("sensor.r_nominal_ohm", [](DeviceProfile& p) -> double& { return p.r_nominal_ohm; }),
      real("widlar.beta_a_per_v2", [](DeviceProfile& p) -> double& { return p.widlar.beta_a_per_v2; }),
      real("widlar.v_sg_v", [](DeviceProfile& p) -> double& { return p.widlar.v_sg_v; }),
      real("widlar.v_tp_abs_v", [](DeviceProfile& p) -> double& { return p.widlar.v_tp_abs_v; }),
      real("widlar.eta", [](DeviceProfile& p) -> double& { return p.widlar.eta; }),
      real("widlar.c_eff_f", [](DeviceProfile& p) -> double& { return p.widlar.c_eff_f; }),
      real("widlar.delta_v_v", [](DeviceProfile& p) -> double& { return p.widlar.delta_v_v; }),
      real("widlar.gamma", [](DeviceProfile& p) -> double& { return p.widlar.gamma; }),
      real("widlar.e_c_v_per_m", [](DeviceProfile& p) -> double& { return p.widlar.e_c_v_per_m; }),
      real("widlar.channel_length_m", [](DeviceProfile& p) -> double& { return p.widlar.channel_length_m; }),
      real("widlar.r_l_i_tail_v", [](DeviceProfile& p) -> double& { return p.widlar.r_l_i_tail_v; }),
      {"widlar.regime", FieldType::regime, {}, {}},
      real("vt.v_nominal_v", [](DeviceProfile& p) -> double& { return p.vt.v_nominal_v; }),
      real("vt.t_nominal_c", [](DeviceProfile& p) -> double& { return p.vt.t_nominal_c; }),
      real("vt.k_per_v", [](DeviceProfile& p) -> double& { return p.vt.k_per_v; }),
      real("vt.k_per_k", [](DeviceProfile& p) -> double& { return p.vt.k_per_k; }),
      real("reference.resolution_bits", [](DeviceProfile& p) -> double& { return ref(p).resolution_bits; }),
      real("reference.energy_j", [](DeviceProfile& p) -> double& { return ref(p).energy_j; }),
      real("reference.fom_j_per_cs", [](DeviceProfile& p) -> double& { return ref(p).fom_j_per_cs; }),
      real("reference.dynamic_range_db", [](DeviceProfile& p) -> double& { return ref(p).dynamic_range_db; }),
  };
  return table;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

void require(bool ok, const char* field, const std::string& what) {
  if (!ok) throw ValidationError(field, what);
}

}  // namespace

void validate(const DeviceProfile& p) {
  require(!p.name.empty(), "name", "missing");
  for (char c : p.name) {
    require(!std::isspace(static_cast<unsigned char>(c)) && c != '=' && c != '#' && c != ',', "name",
            "must not contain whitespace, '=', '#' or ','");
  }
  require(p.technology_node_m > 0.0, "technology.node_m", "must be positive");
  require(p.vdd_v > 0.0, "supply.vdd_v", "must be positive");
  require(p.f_o_hz > 0.0, "oscillator.f_o_hz", "must be positive");
  require(p.active_power_w > 0.0, "power.active_w", "must be positive");
  require(p.jitter_slope >= 0.0, "jitter.k", "must be nonnegative");
  require(p.white_jitter_coeff >= 0.0, "jitter.a", "must be nonnegative");
  require(p.t_meas_s > 0.0, "readout.t_meas_s", "must be positive");
  require(p.readout_period_s > 0.0, "readout.period_s", "must be positive");
  require(p.t_meas_s <= p.readout_period_s, "readout.t_meas_s", "must not exceed readout.period_s");
  require(p.phase0_cycles >= 0.0 && p.phase0_cycles < 1.0, "readout.phase0_cycles", "must be in [0, 1)");
  require(p.counter_bits >= 4 && p.counter_bits <= 64 && p.counter_bits % 4 == 0, "counter.bits",
          "must be a multiple of 4 in [4, 64]");
  require(p.r_min_ohm > 0.0, "sensor.r_min_ohm", "must be positive");
  require(p.r_max_ohm > p.r_min_ohm, "sensor.r_max_ohm", "must exceed sensor.r_min_ohm");
  require(p.r_max_ohm <= kMaxSensorOhm, "sensor.r_max_ohm", "must not exceed 20 kOhm (frequency saturates)");
  require(p.r_nominal_ohm >= p.r_min_ohm && p.r_nominal_ohm <= p.r_max_ohm, "sensor.r_nominal_ohm",
          "must lie inside the sensor range");
  require(p.phase_noise_ref.offset_hz > 0.0, "phase_noise.offset_hz", "must be positive");
  require(std::isfinite(p.phase_noise_ref.l_dbc_per_hz), "phase_noise.l_dbc", "must be finite");
  require(std::isfinite(p.supply_pushing_hz_per_v), "supply.pushing_hz_per_v", "must be finite");
  require(std::isfinite(p.temp_coeff_hz_per_k), "thermal.temp_coeff_hz_per_k", "must be finite");

  const WidlarParams& w = p.widlar;
  require(w.beta_a_per_v2 > 0.0, "widlar.beta_a_per_v2", "must be positive");
  require(w.v_sg_v > w.v_tp_abs_v, "widlar.v_sg_v", "must exceed widlar.v_tp_abs_v");
  require(w.v_tp_abs_v >= 0.0, "widlar.v_tp_abs_v", "must be nonnegative");
  require(w.eta > 0.0, "widlar.eta", "must be positive");
  require(w.c_eff_f > 0.0, "widlar.c_eff_f", "must be positive");
  require(w.gamma > 0.0, "widlar.gamma", "must be positive");
  require(w.r_l_i_tail_v >= 0.0, "widlar.r_l_i_tail_v", "must be nonnegative");
  if (w.regime == ChannelRegime::long_channel) {
    require(w.delta_v_v > 0.0, "widlar.delta_v_v", "must be positive");
  } else {
    require(w.e_c_v_per_m > 0.0, "widlar.e_c_v_per_m", "must be positive");
    require(w.channel_length_m > 0.0, "widlar.channel_length_m", "must be positive");
  }
  require(std::isfinite(p.vt.k_per_v) && std::isfinite(p.vt.k_per_k) &&
              std::isfinite(p.vt.t_nominal_c) && p.vt.v_nominal_v >= 0.0,
          "vt", "coefficients must be finite");
}

void resolve_fitted_parameters(DeviceProfile& p, const PhysicalConstants& consts) {
  if (p.r_nominal_ohm == 0.0 && p.r_min_ohm > 0.0 && p.r_max_ohm > 0.0) {
    p.r_nominal_ohm = std::sqrt(p.r_min_ohm * p.r_max_ohm);
  }
  if (p.widlar.eta == 0.0) {
    require(p.active_power_w > 0.0 && p.f_o_hz > 0.0 && p.vdd_v > 0.0, "widlar.eta",
            "cannot be fitted without positive power, f_o and V_DD");
    p.widlar.eta = fit_eta_to_reference(p, p.widlar, consts);
  }
  if (p.widlar.c_eff_f == 0.0) {
    require(p.r_nominal_ohm > 0.0, "widlar.c_eff_f", "cannot be fitted without sensor.r_nominal_ohm");
    p.widlar.c_eff_f = calibrate_c_eff(p);
  }
}

DeviceProfile load_profile(std::string_view source) {
  DeviceProfile p;
  std::set<std::string, std::less<>> seen;
  int line_no = 0;
  while (!source.empty()) {
    ++line_no;
    const auto nl = source.find('\n');
    std::string_view line = source.substr(0, nl);
    source = nl == std::string_view::npos ? std::string_view{} : source.substr(nl + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(line_no, "expected 'key = value'");
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(line_no, "empty key");
    if (value.empty()) throw ConfigError(line_no, "empty value for '" + std::string(key) + "'");
    const Field* field = nullptr;
    for (const auto& f : fields()) {
      if (f.key == key) field = &f;
    }
    if (!field) throw ConfigError(line_no, "unknown key '" + std::string(key) + "'");
    if (!seen.emplace(key).second) throw ConfigError(line_no, "duplicate key '" + std::string(key) + "'");
    try {
      switch (field->type) {
        case FieldType::text:
          p.name = std::string(value);
          break;
        case FieldType::real:
          field->real(p) = parse_double(value);
          break;
        case FieldType::integer:
          field->integer(p) = static_cast<int>(parse_integer(value));
          break;
        case FieldType::regime:
          if (value == "long") {
            p.widlar.regime = ChannelRegime::long_channel;
          } else if (value == "short") {
            p.widlar.regime = ChannelRegime::short_channel;
          } else {
            throw std::invalid_argument("expected 'long' or 'short'");
          }
          break;
      }
    } catch (const std::invalid_argument& e) {
      throw ConfigError(line_no, "bad value for '" + std::string(key) + "': " + e.what());
    }
  }
  if (p.name.empty()) throw ValidationError("name", "missing");
  resolve_fitted_parameters(p);
  validate(p);
  return p;
}

DeviceProfile load_profile_file(const std::string& path) {
  std::string text;
  try {
    text = read_text_file(path);
  } catch (const std::runtime_error& e) {
    throw ConfigError(0, e.what());
  }
  return load_profile(text);
}

std::string serialize_profile(const DeviceProfile& profile) {
  DeviceProfile p = profile;  // accessors take non-const references
  std::string out;
  for (const auto& f : fields()) {
    if (f.key.starts_with("reference.") && !p.reference) continue;
    out += f.key;
    out += " = ";
    switch (f.type) {
      case FieldType::text:
        out += p.name;
        break;
      case FieldType::real:
        out += format_roundtrip(f.real(p));
        break;
      case FieldType::integer:
        out += std::to_string(f.integer(p));
        break;
      case FieldType::regime:
        out += p.widlar.regime == ChannelRegime::long_channel ? "long" : "short";
        break;
    }
    out += '\n';
  }
  return out;
}

std::vector<DeviceProfile> builtin_profiles() {
  // Bias points of the Widlar source are fitted (not published): overdrive
  // 0.5 V and beta 0.1 A/V^2 put the transfer-curve saturation near 20 kOhm.
  // eta is fitted to each design's phase-noise point and c_eff to f_o at the
  // nominal sensor resistance.
  auto base = [](std::string name) {
    DeviceProfile p;
    p.name = std::move(name);
    p.readout_period_s = 1.0;
    p.counter_bits = 24;
    p.r_min_ohm = 100.0;
    p.r_max_ohm = 20.0e3;
    p.r_nominal_ohm = 1.0e3;
    p.temp_coeff_hz_per_k = -50.0e3;
    p.widlar.beta_a_per_v2 = 0.1;
    return p;
  };

  DeviceProfile d1 = base("d1");
  d1.technology_node_m = 0.35e-6;
  d1.vdd_v = 1.75;
  d1.f_o_hz = 83.2e6;
  d1.active_power_w = 86.1e-6;
  d1.phase_noise_ref = {100.0e3, -92.5};
  d1.jitter_slope = 1.88e-6;
  d1.t_meas_s = 10.0e-3;
  d1.supply_pushing_hz_per_v = 100.0e3;
  d1.widlar.v_sg_v = 1.2;
  d1.widlar.v_tp_abs_v = 0.7;
  d1.widlar.regime = ChannelRegime::long_channel;
  d1.widlar.channel_length_m = 0.35e-6;
  d1.vt = {0.0, 27.0, -0.6, 0.012};
  d1.reference = TableReference{18.0, 861.0e-9, 3.29e-12, 103.7};

  DeviceProfile d2 = base("d2");
  d2.technology_node_m = 0.35e-6;
  d2.vdd_v = 2.0;
  d2.f_o_hz = 83.2e6;
  d2.active_power_w = 1.92e-3;
  d2.phase_noise_ref = {1.0e6, -124.5};
  d2.jitter_slope = 3.67e-7;
  d2.t_meas_s = 10.0e-3;
  d2.supply_pushing_hz_per_v = 75.0e3;
  d2.widlar.v_sg_v = 1.2;
  d2.widlar.v_tp_abs_v = 0.7;
  d2.widlar.regime = ChannelRegime::long_channel;
  d2.widlar.channel_length_m = 0.35e-6;
  d2.vt = {0.0, 27.0, -0.6, 0.012};
  d2.reference = TableReference{20.0, 19.2e-6, 18.3e-12, 113.5};

  DeviceProfile d3 = base("d3");
  d3.technology_node_m = 0.18e-6;
  d3.vdd_v = 2.0;
  d3.f_o_hz = 61.3e6;
  d3.active_power_w = 1.76e-3;
  d3.phase_noise_ref = {1.0e6, -130.5};
  d3.jitter_slope = 1.55e-7;
  d3.t_meas_s = 30.0e-3;
  d3.supply_pushing_hz_per_v = 55.0e3;
  d3.widlar.v_sg_v = 0.95;
  d3.widlar.v_tp_abs_v = 0.45;
  d3.widlar.regime = ChannelRegime::short_channel;
  d3.widlar.channel_length_m = 0.18e-6;
  d3.vt = {0.0, 27.0, -0.6, 0.012};
  d3.reference = TableReference{21.0, 52.8e-6, 25.1e-12, 121.1};

  std::vector<DeviceProfile> out = {d1, d2, d3};
  for (auto& p : out) {
    resolve_fitted_parameters(p);
    validate(p);
  }
  return out;
}

DeviceProfile resolve_profile(const std::string& name_or_path) {
  for (auto& p : builtin_profiles()) {
    if (p.name == name_or_path) return p;
  }
  return load_profile_file(name_or_path);
}

}  // namespace rdc
