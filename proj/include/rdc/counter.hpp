#pragma once

#include <cstdint>

namespace rdc {

/// Cascade of synchronous 4-bit counters with output look-ahead.
struct CounterConfig {
  int n_stages = 6;
  double t_phl_s = 5.0e-9;  // terminal-count propagation delay
  double t_su_s = 2.0e-9;   // count-enable setup time

  int width_bits() const { return 4 * n_stages; }
};

void validate(const CounterConfig& cfg);

/// Rising edges seen in a gate of length t_meas when the first edge
/// arrives after (1 - phase0) cycles: floor(f * t_meas + phase0).
/// Throws OverflowError when the count does not fit `width_bits`.
std::uint64_t gated_count(double f_hz, double t_meas_s, double phase0_cycles = 0.0,
                          int width_bits = 64);

/// 1 / (t_PHL + t_su). With look-ahead this does not depend on the number
/// of stages.
double max_clock(const CounterConfig& cfg);

/// True iff max_count < 2^(4 * n_stages).
bool width_check(const CounterConfig& cfg, std::uint64_t max_count);

/// Smallest width in bits that holds `count`.
int required_bits(std::uint64_t count);

}  // namespace rdc
