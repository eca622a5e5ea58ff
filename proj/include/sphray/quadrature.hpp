#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

// Composite Gauss-Legendre quadrature on subintervals of [0, pi], cumulative
// integrals cached on a breakpoint grid, and endpoint power-law exponent
// estimation by log-log regression on a geometric sample ladder.

namespace sphray::quad {

inline constexpr double kPi = std::numbers::pi_v<double>;

namespace detail {

// Nodes and weights of the p-point Gauss-Legendre rule on [-1, 1],
// computed by Newton iteration on the Legendre recurrence and cached.
inline const std::pair<std::vector<double>, std::vector<double>>& gauss_rule(int pts) {
  if (pts < 1 || pts > 64) {
    throw std::invalid_argument("points per panel must be in [1, 64]");
  }
  static std::map<int, std::pair<std::vector<double>, std::vector<double>>> cache;
  static std::mutex mutex;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(pts);
  if (it != cache.end()) return it->second;

  std::vector<double> x(pts), w(pts);
  const int half = (pts + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Chebyshev estimate of the i-th root, refined by Newton.
    double z = std::cos(kPi * (i + 0.75) / (pts + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < pts; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      pp = pts * (z * p0 - p1) / (z * z - 1.0);
      double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    x[i] = -z;
    x[pts - 1 - i] = z;
    w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    w[pts - 1 - i] = w[i];
  }
  return cache.emplace(pts, std::make_pair(std::move(x), std::move(w))).first->second;
}

inline bool finite(double v) { return std::isfinite(v); }
inline bool finite(const std::complex<double>& v) {
  return std::isfinite(v.real()) && std::isfinite(v.imag());
}

}  // namespace detail

// Composite rule: `panels` equal subdivisions of [a, b], `points_per_panel`
// Gauss-Legendre nodes each.  Weights sum to b - a.
struct QuadratureRule {
  QuadratureRule(double a, double b, int panels, int points_per_panel)
      : panels(panels), points_per_panel(points_per_panel) {
    if (panels < 1) throw std::invalid_argument("panel count must be >= 1");
    if (!(a < b)) throw std::invalid_argument("quadrature interval is empty");
    const auto& [gx, gw] = detail::gauss_rule(points_per_panel);
    const double h = (b - a) / panels;
    nodes.reserve(static_cast<std::size_t>(panels) * points_per_panel);
    weights.reserve(nodes.capacity());
    for (int p = 0; p < panels; ++p) {
      const double lo = a + p * h;
      const double mid = lo + 0.5 * h;
      for (int i = 0; i < points_per_panel; ++i) {
        nodes.push_back(mid + 0.5 * h * gx[i]);
        weights.push_back(0.5 * h * gw[i]);
      }
    }
  }

  std::vector<double> nodes;
  std::vector<double> weights;
  int panels;
  int points_per_panel;
};

// Integral of f over [a, b] with the composite rule.  Throws if f produces a
// non-finite value; the offending node is reported.
template <class T>
T integrate(const std::function<T(double)>& f, double a, double b, int panels = 64,
            int points_per_panel = 10) {
  if (a == b) return T{};
  if (a > b) throw std::invalid_argument("quadrature interval is reversed");
  const QuadratureRule rule(a, b, panels, points_per_panel);
  T acc{};
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    T v = f(rule.nodes[i]);
    if (!detail::finite(v)) {
      std::ostringstream msg;
      msg << "integrand is non-finite at s = " << rule.nodes[i];
      throw std::runtime_error(msg.str());
    }
    acc += rule.weights[i] * v;
  }
  return acc;
}

// Running integral of f from breakpoints.front() along an increasing grid.
// Values at breakpoints are cached partial sums; evaluation between
// breakpoints adds a single local panel from the nearest breakpoint below,
// so off-grid values keep full quadrature accuracy.
template <class T>
class CumulativeIntegral {
 public:
  CumulativeIntegral(std::function<T(double)> f, std::vector<double> breakpoints,
                     int points_per_panel = 10)
      : f_(std::move(f)),
        breakpoints_(std::move(breakpoints)),
        points_per_panel_(points_per_panel) {
    if (breakpoints_.size() < 2) {
      throw std::invalid_argument("cumulative integral needs at least two breakpoints");
    }
    for (std::size_t i = 0; i + 1 < breakpoints_.size(); ++i) {
      if (!(breakpoints_[i] < breakpoints_[i + 1])) {
        throw std::invalid_argument("breakpoints must be strictly increasing");
      }
    }
    if (breakpoints_.front() < 0.0 || breakpoints_.back() > kPi + 1e-12) {
      throw std::invalid_argument("breakpoints must lie in [0, pi]");
    }
    values_.resize(breakpoints_.size());
    values_[0] = T{};
    for (std::size_t i = 1; i < breakpoints_.size(); ++i) {
      values_[i] = values_[i - 1] + integrate<T>(f_, breakpoints_[i - 1], breakpoints_[i],
                                                 1, points_per_panel_);
    }
  }

  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<T>& values() const { return values_; }

  // Integral from breakpoints.front() to s.
  T operator()(double s) const {
    if (s < breakpoints_.front() - 1e-12 || s > breakpoints_.back() + 1e-12) {
      throw std::domain_error("cumulative integral evaluated outside its grid");
    }
    s = std::clamp(s, breakpoints_.front(), breakpoints_.back());
    auto hi = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), s);
    std::size_t i = static_cast<std::size_t>(hi - breakpoints_.begin());
    if (i > 0) --i;
    if (i + 1 == breakpoints_.size()) return values_.back();
    if (s == breakpoints_[i]) return values_[i];
    return values_[i] + integrate<T>(f_, breakpoints_[i], s, 1, points_per_panel_);
  }

 private:
  std::function<T(double)> f_;
  std::vector<double> breakpoints_;
  std::vector<T> values_;
  int points_per_panel_;
};

// Least-squares slope of log|f| against log(pi - s) over a geometric ladder
// of sample points in [s_lo, s_hi]; estimates alpha in f ~ C (pi - s)^alpha.
inline double endpoint_exponent(const std::function<double(double)>& f, double s_lo,
                                double s_hi, int samples = 16) {
  if (!(s_lo < s_hi)) throw std::invalid_argument("exponent window is empty");
  if (s_hi > kPi - 1e-8) {
    throw std::invalid_argument("exponent window must end at or below pi - 1e-8");
  }
  if (s_lo > kPi - 1e-2) {
    throw std::invalid_argument("exponent window must start at or below pi - 1e-2");
  }
  if (samples < 4) throw std::invalid_argument("exponent fit needs at least 4 samples");

  const double d_max = kPi - s_lo;
  const double d_min = kPi - s_hi;
  const double rho = std::pow(d_min / d_max, 1.0 / (samples - 1));
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double delta = d_max * std::pow(rho, i);
    const double v = f(kPi - delta);
    if (!std::isfinite(v)) throw std::runtime_error("exponent fit hit a non-finite value");
    const double av = std::abs(v);
    if (av < 1e-280) {
      throw std::domain_error("exponent is undefined: function vanishes on the window");
    }
    const double x = std::log(delta);
    const double y = std::log(av);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = samples;
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace sphray::quad
