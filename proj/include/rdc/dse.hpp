#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace rdc {

/// Simulated power / frequency / phase-noise surfaces over the latch and
/// DRO sizing axes. Matrices are indexed [latch][dro].
struct DesignGrid {
  std::vector<double> latch_wl;
  std::vector<double> dro_wl;
  std::vector<std::vector<double>> power_w;
  std::vector<std::vector<double>> freq_hz;
  std::vector<std::vector<double>> pn_dbc;
};

void validate(const DesignGrid& grid);

/// log10(10^(pn/10) / f * p). Lower is better.
double cost(double pn_dbc, double f_hz, double p_w);

struct DesignChoice {
  double latch_wl = 0.0;
  double dro_wl = 0.0;
  double cost = 0.0;
  double power_w = 0.0;
  double freq_hz = 0.0;
  double pn_dbc = 0.0;
};

/// Cell with the smallest cost; ties go to lower power, then lower latch
/// W/L, then lower DRO W/L. Throws ValidationError on an empty grid.
DesignChoice argmin_cost(const DesignGrid& grid, unsigned threads = 1);

/// Parameters of the synthetic surface generator.
///
///   power = p0 * (1 + latch_gain * latch) * (1 + dro_gain * dro)
///   freq  = f0 * (1 + latch_speedup * latch) / (1 + (latch / latch_knee)^2)
///              * dro / (dro + dro_knee) / (1 + dro / dro_load)
///   pn    = pn_floor + pn_span * p_sat / (power + p_sat)
///
/// Power rises along both axes, frequency peaks along both axes and phase
/// noise improves with power but saturates toward pn_floor.
struct SurfaceModel {
  double p0_w = 0.5e-3;
  double latch_gain = 0.05;
  double dro_gain = 0.02;
  double f0_hz = 120.0e6;
  double latch_speedup = 0.15;
  double latch_knee = 8.0;
  double dro_knee = 5.0;
  double dro_load = 60.0;
  double pn_floor_dbc = -128.0;
  double pn_span_db = 12.0;
  double p_sat_w = 1.0e-3;
};

DesignGrid grid_from_model(const std::vector<double>& latch_wl, const std::vector<double>& dro_wl,
                           const SurfaceModel& model = {});

/// Long-format CSV, columns latch_wl,dro_wl,power_w,freq_hz,pn_dbc, one row
/// per cell in any order; every (latch, dro) pair must appear exactly once.
DesignGrid parse_grid_csv(std::string_view text);
std::string grid_to_csv(const DesignGrid& grid);

/// Columns latch_wl,dro_wl,power_w,freq_hz,pn_dbc,cost.
std::string choice_to_csv(const DesignChoice& choice);

}  // namespace rdc
