#include "rdc/counter.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "rdc/errors.hpp"

namespace rdc {

void validate(const CounterConfig& cfg) {
  if (cfg.n_stages < 1 || cfg.n_stages > 16) {
    throw ValidationError("counter.n_stages", "must be in [1, 16], got " + std::to_string(cfg.n_stages));
  }
  if (!(cfg.t_phl_s > 0.0)) throw ValidationError("counter.t_phl_s", "must be positive");
  if (!(cfg.t_su_s > 0.0)) throw ValidationError("counter.t_su_s", "must be positive");
}

int required_bits(std::uint64_t count) { return count == 0 ? 1 : std::bit_width(count); }

std::uint64_t gated_count(double f_hz, double t_meas_s, double phase0_cycles, int width_bits) {
  if (!(f_hz > 0.0)) throw DomainError("count frequency must be positive");
  if (!(t_meas_s >= 0.0)) throw DomainError("gate time must be nonnegative");
  if (!(phase0_cycles >= 0.0 && phase0_cycles < 1.0)) throw DomainError("phase0 must be in [0, 1)");
  const double edges = std::floor(f_hz * t_meas_s + phase0_cycles);
  if (!(edges < 0x1.0p64)) throw OverflowError(~std::uint64_t{0}, width_bits, 65);
  const auto count = static_cast<std::uint64_t>(edges);
  if (width_bits < 64 && count >= (std::uint64_t{1} << width_bits)) {
    throw OverflowError(count, width_bits, required_bits(count));
  }
  return count;
}

double max_clock(const CounterConfig& cfg) {
  validate(cfg);
  return 1.0 / (cfg.t_phl_s + cfg.t_su_s);
}

bool width_check(const CounterConfig& cfg, std::uint64_t max_count) {
  const int w = cfg.width_bits();
  if (w >= 64) return true;
  return max_count < (std::uint64_t{1} << w);
}

}  // namespace rdc
