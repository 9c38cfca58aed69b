#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace rdc {

/// Base of every error raised by the library. `kind()` is a short
/// machine-readable tag used by the CLI's one-line error output.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
  virtual const char* kind() const noexcept { return "error"; }
};

/// Malformed configuration text. Carries the 1-based line number.
class ConfigError : public Error {
public:
  ConfigError(int line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const noexcept { return line_; }
  const char* kind() const noexcept override { return "config"; }

private:
  int line_;
};

/// A value violates a documented invariant; `field()` names it.
class ValidationError : public Error {
public:
  ValidationError(std::string field, const std::string& what)
      : Error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }
  const char* kind() const noexcept override { return "validation"; }

private:
  std::string field_;
};

/// Argument outside the mathematical domain of a model equation.
class DomainError : public Error {
public:
  using Error::Error;
  const char* kind() const noexcept override { return "domain"; }
};

/// Query outside the range covered by a fitted curve.
class RangeError : public Error {
public:
  using Error::Error;
  const char* kind() const noexcept override { return "range"; }
};

/// Calibration data cannot be fitted (non-monotone, too few points, ...).
class FitError : public Error {
public:
  using Error::Error;
  const char* kind() const noexcept override { return "fit"; }
};

/// Counter overflow; `required_bits()` is the width that would have fit.
class OverflowError : public Error {
public:
  OverflowError(std::uint64_t count, int width_bits, int required_bits)
      : Error("count " + std::to_string(count) + " overflows a " +
              std::to_string(width_bits) + "-bit counter; requires " +
              std::to_string(required_bits) + " bits"),
        count_(count), width_bits_(width_bits), required_bits_(required_bits) {}
  std::uint64_t count() const noexcept { return count_; }
  int width_bits() const noexcept { return width_bits_; }
  int required_bits() const noexcept { return required_bits_; }
  const char* kind() const noexcept override { return "overflow"; }

private:
  std::uint64_t count_;
  int width_bits_;
  int required_bits_;
};

}  // namespace rdc
