#pragma once

#include <span>
#include <vector>

namespace rdc {

/// Shape-preserving piecewise cubic Hermite interpolant (Fritsch-Butland
/// weighted harmonic-mean slopes with the three-point shape-preserving end
/// condition). For strictly monotone data the interpolant is monotone on
/// every interval and passes through every knot exactly. Two knots give
/// the straight line between them.
class MonotoneCubic {
public:
  MonotoneCubic() = default;

  /// `x` strictly increasing; `y` strictly increasing or strictly
  /// decreasing. Throws FitError otherwise.
  MonotoneCubic(std::span<const double> x, std::span<const double> y);

  double operator()(double x) const;
  double derivative(double x) const;

  /// Unique x in [x_front, x_back] with f(x) = y, by safeguarded Newton
  /// iteration inside the bracketing interval. Relative tolerance 1e-10 on
  /// x or better. Throws RangeError when y lies outside the knot range.
  double solve(double y) const;

  double x_min() const { return x_.front(); }
  double x_max() const { return x_.back(); }
  double y_min() const;
  double y_max() const;
  bool increasing() const { return increasing_; }

  const std::vector<double>& x() const { return x_; }
  const std::vector<double>& y() const { return y_; }
  const std::vector<double>& slopes() const { return m_; }

private:
  std::size_t interval(double x) const;

  std::vector<double> x_;
  std::vector<double> y_;
  std::vector<double> m_;
  bool increasing_ = true;
};

}  // namespace rdc
