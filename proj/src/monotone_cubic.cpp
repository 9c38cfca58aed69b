#include "rdc/monotone_cubic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "rdc/errors.hpp"

namespace rdc {

namespace {

// Hermite basis on t in [0, 1].
double h00(double t) { return (1.0 + 2.0 * t) * (1.0 - t) * (1.0 - t); }
double h10(double t) { return t * (1.0 - t) * (1.0 - t); }
double h01(double t) { return t * t * (3.0 - 2.0 * t); }
double h11(double t) { return t * t * (t - 1.0); }

int sign(double v) { return (v > 0.0) - (v < 0.0); }

double end_slope(double h0, double h1, double d0, double d1) {
  double m = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
  if (sign(m) != sign(d0)) {
    m = 0.0;
  } else if (sign(d0) != sign(d1) && std::fabs(m) > 3.0 * std::fabs(d0)) {
    m = 3.0 * d0;
  }
  return m;
}

}  // namespace

MonotoneCubic::MonotoneCubic(std::span<const double> x, std::span<const double> y)
    : x_(x.begin(), x.end()), y_(y.begin(), y.end()) {
  const std::size_t n = x_.size();
  if (n != y_.size()) throw FitError("knot abscissae and ordinates differ in length");
  if (n < 2) throw FitError("need at least 2 knots, got " + std::to_string(n));
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(x_[i]) || !std::isfinite(y_[i])) throw FitError("non-finite knot");
  }
  for (std::size_t i = 1; i < n; ++i) {
    if (!(x_[i] > x_[i - 1])) throw FitError("knot abscissae must be strictly increasing");
  }
  increasing_ = y_[1] > y_[0];
  for (std::size_t i = 1; i < n; ++i) {
    const bool up = y_[i] > y_[i - 1];
    const bool down = y_[i] < y_[i - 1];
    if ((increasing_ && !up) || (!increasing_ && !down)) {
      throw FitError("data not strictly monotone at knot " + std::to_string(i));
    }
  }

  std::vector<double> h(n - 1), d(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    h[k] = x_[k + 1] - x_[k];
    d[k] = (y_[k + 1] - y_[k]) / h[k];
  }
  m_.assign(n, 0.0);
  if (n == 2) {
    m_[0] = m_[1] = d[0];
    return;
  }
  for (std::size_t k = 1; k + 1 < n; ++k) {
    if (d[k - 1] * d[k] > 0.0) {
      const double w1 = 2.0 * h[k] + h[k - 1];
      const double w2 = h[k] + 2.0 * h[k - 1];
      m_[k] = (w1 + w2) / (w1 / d[k - 1] + w2 / d[k]);
    }
  }
  m_[0] = end_slope(h[0], h[1], d[0], d[1]);
  m_[n - 1] = end_slope(h[n - 2], h[n - 3], d[n - 2], d[n - 3]);
}

std::size_t MonotoneCubic::interval(double x) const {
  if (x < x_.front() || x > x_.back()) {
    throw RangeError("abscissa " + std::to_string(x) + " outside [" + std::to_string(x_.front()) +
                     ", " + std::to_string(x_.back()) + "]");
  }
  auto it = std::upper_bound(x_.begin(), x_.end(), x);
  std::size_t k = static_cast<std::size_t>(it - x_.begin());
  k = k == 0 ? 0 : k - 1;
  return std::min(k, x_.size() - 2);
}

double MonotoneCubic::operator()(double x) const {
  const std::size_t k = interval(x);
  const double h = x_[k + 1] - x_[k];
  const double t = (x - x_[k]) / h;
  return h00(t) * y_[k] + h10(t) * h * m_[k] + h01(t) * y_[k + 1] + h11(t) * h * m_[k + 1];
}

double MonotoneCubic::derivative(double x) const {
  const std::size_t k = interval(x);
  const double h = x_[k + 1] - x_[k];
  const double t = (x - x_[k]) / h;
  const double dh00 = 6.0 * t * t - 6.0 * t;
  const double dh10 = 3.0 * t * t - 4.0 * t + 1.0;
  const double dh01 = -dh00;
  const double dh11 = 3.0 * t * t - 2.0 * t;
  return (dh00 * y_[k] + dh01 * y_[k + 1]) / h + dh10 * m_[k] + dh11 * m_[k + 1];
}

double MonotoneCubic::y_min() const { return increasing_ ? y_.front() : y_.back(); }
double MonotoneCubic::y_max() const { return increasing_ ? y_.back() : y_.front(); }

double MonotoneCubic::solve(double y) const {
  if (!(y >= y_min() && y <= y_max())) {
    throw RangeError("value " + std::to_string(y) + " outside curve range [" + std::to_string(y_min()) +
                     ", " + std::to_string(y_max()) + "]");
  }
  // Locate the bracketing interval on the ordinates.
  std::size_t k = 0;
  {
    std::size_t lo = 0, hi = y_.size() - 1;
    while (hi - lo > 1) {
      const std::size_t mid = (lo + hi) / 2;
      const bool below = increasing_ ? (y_[mid] <= y) : (y_[mid] >= y);
      (below ? lo : hi) = mid;
    }
    k = lo;
  }
  if (y == y_[k]) return x_[k];
  if (y == y_[k + 1]) return x_[k + 1];

  // g(x) = f(x) - y has opposite signs at the interval ends.
  const double dir = increasing_ ? 1.0 : -1.0;
  double lo = x_[k], hi = x_[k + 1];
  double x = lo + (y - y_[k]) / (y_[k + 1] - y_[k]) * (hi - lo);
  const double xtol = 1e-14 * std::max(std::fabs(lo), std::fabs(hi));
  for (int iter = 0; iter < 200; ++iter) {
    const double g = dir * ((*this)(x) - y);
    if (g == 0.0) return x;
    (g < 0.0 ? lo : hi) = x;
    const double slope = dir * derivative(x);
    double next = slope > 0.0 ? x - g / slope : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::fabs(next - x) <= xtol || hi - lo <= xtol) return next;
    x = next;
  }
  return x;
}

}  // namespace rdc
