#pragma once

#include <array>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>

#include "sphray/sphere_geom.hpp"
#include "sphray/vec.hpp"

// Degree-l solid harmonics on R^3 as exact sparse polynomials, and the two
// tangential vector families they induce on the unit sphere: surface
// gradients and their 90-degree rotations about the radial axis.

namespace sphray::harmonics {

using geom::UnitVector;

// Sparse polynomial in three variables, keyed by monomial exponents.
class Polynomial3 {
 public:
  using Exponents = std::array<int, 3>;

  Polynomial3() = default;

  static Polynomial3 monomial(int px, int py, int pz, double c) {
    if (px < 0 || py < 0 || pz < 0) throw std::invalid_argument("monomial exponents must be >= 0");
    Polynomial3 p;
    p.add_term({px, py, pz}, c);
    return p;
  }

  static Polynomial3 radius_squared() {
    Polynomial3 p;
    p.add_term({2, 0, 0}, 1.0);
    p.add_term({0, 2, 0}, 1.0);
    p.add_term({0, 0, 2}, 1.0);
    return p;
  }

  void add_term(const Exponents& e, double c) {
    const double v = (terms_[e] += c);
    if (v == 0.0) terms_.erase(e);
  }

  bool empty() const { return terms_.empty(); }
  const std::map<Exponents, double>& terms() const { return terms_; }

  Polynomial3 operator+(const Polynomial3& other) const {
    Polynomial3 out = *this;
    for (const auto& [e, c] : other.terms_) out.add_term(e, c);
    return out;
  }

  Polynomial3 scaled(double c) const {
    Polynomial3 out;
    if (c == 0.0) return out;
    for (const auto& [e, v] : terms_) out.terms_[e] = v * c;
    return out;
  }

  Polynomial3 operator*(const Polynomial3& other) const {
    Polynomial3 out;
    for (const auto& [ea, ca] : terms_) {
      for (const auto& [eb, cb] : other.terms_) {
        out.add_term({ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]}, ca * cb);
      }
    }
    return out;
  }

  Polynomial3 derivative(int axis) const {
    if (axis < 0 || axis > 2) throw std::invalid_argument("derivative axis must be 0, 1, or 2");
    Polynomial3 out;
    for (const auto& [e, c] : terms_) {
      if (e[axis] == 0) continue;
      Exponents d = e;
      d[axis] -= 1;
      out.add_term(d, c * e[axis]);
    }
    return out;
  }

  Polynomial3 laplacian() const {
    Polynomial3 out;
    for (int axis = 0; axis < 3; ++axis) {
      for (const auto& [e, c] : derivative(axis).derivative(axis).terms_) out.add_term(e, c);
    }
    return out;
  }

  std::array<Polynomial3, 3> gradient() const {
    return {derivative(0), derivative(1), derivative(2)};
  }

  double eval(const Vec& x) const {
    if (x.size() != 3) throw std::invalid_argument("polynomial eval needs a 3-vector");
    double sum = 0.0;
    for (const auto& [e, c] : terms_) {
      double term = c;
      for (int axis = 0; axis < 3; ++axis) {
        for (int p = 0; p < e[axis]; ++p) term *= x[axis];
      }
      sum += term;
    }
    return sum;
  }

  // Total degree of the highest monomial; -1 for the zero polynomial.
  int degree() const {
    int deg = -1;
    for (const auto& [e, c] : terms_) deg = std::max(deg, e[0] + e[1] + e[2]);
    return deg;
  }

  double max_abs_coefficient() const {
    double worst = 0.0;
    for (const auto& [e, c] : terms_) worst = std::max(worst, std::abs(c));
    return worst;
  }

  double coefficient_norm() const {
    double sum = 0.0;
    for (const auto& [e, c] : terms_) sum += c * c;
    return std::sqrt(sum);
  }

 private:
  std::map<Exponents, double> terms_;
};

enum class Part { real, imag };

namespace detail {

inline double binomial(int m, int t) {
  double value = 1.0;
  for (int i = 1; i <= t; ++i) value = value * (m - t + i) / i;
  return value;
}

// Re or Im of (x + iy)^m times z^{l-m}.
inline Polynomial3 harmonic_seed(int l, int m, Part part) {
  Polynomial3 seed;
  for (int t = (part == Part::real ? 0 : 1); t <= m; t += 2) {
    const double sign = (t % 4 < 2) ? 1.0 : -1.0;
    seed.add_term({m - t, t, l - m}, sign * binomial(m, t));
  }
  return seed;
}

inline Vec cross(const Vec& a, const Vec& b) {
  return Vec{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

}  // namespace detail

// Harmonic homogeneous polynomial of degree l, normalized so its monomial
// coefficient vector has unit length.  The seed Re/Im[(x+iy)^m] z^{l-m} is
// projected onto harmonics by h = sum_j a_j r^{2j} Laplacian^j(seed) with
// a_0 = 1 and a_j = -a_{j-1} / (2j (2l - 2j + 1)).
inline Polynomial3 solid_harmonic(int l, int m, Part part) {
  if (l < 0) throw std::invalid_argument("harmonic degree l must be >= 0");
  if (m < 0 || m > l) throw std::invalid_argument("harmonic order m must satisfy 0 <= m <= l");
  if (part == Part::imag && m == 0) {
    throw std::invalid_argument("imaginary branch vanishes at m = 0");
  }
  const Polynomial3 seed = detail::harmonic_seed(l, m, part);
  const Polynomial3 r2 = Polynomial3::radius_squared();
  Polynomial3 h = seed;
  Polynomial3 delta = seed.laplacian();
  Polynomial3 rpow = r2;
  double a = 1.0;
  for (int j = 1; !delta.empty(); ++j) {
    a = -a / (2.0 * j * (2.0 * l - 2.0 * j + 1.0));
    h = h + (rpow * delta).scaled(a);
    delta = delta.laplacian();
    rpow = rpow * r2;
  }
  const double flatness = h.laplacian().max_abs_coefficient();
  if (flatness > 1e-9 * std::max(1.0, h.max_abs_coefficient())) {
    throw std::logic_error("harmonic projection left a nonzero Laplacian, coefficient " +
                           std::to_string(flatness));
  }
  const double norm = h.coefficient_norm();
  if (norm == 0.0) throw std::logic_error("harmonic projection produced the zero polynomial");
  return h.scaled(1.0 / norm);
}

// Tangential surface gradient of the degree-l harmonic on the unit sphere:
// grad p(u) - l p(u) u, exactly tangential by Euler's identity.
inline std::function<Vec(const UnitVector&)> surface_gradient_field(int l, int m, Part part) {
  if (l < 1) throw std::invalid_argument("tangential harmonic fields need l >= 1");
  const Polynomial3 p = solid_harmonic(l, m, part);
  const auto grads = p.gradient();
  return [p, grads, l](const UnitVector& u) {
    if (u.dim() != 3) throw std::invalid_argument("harmonic field needs a 3-sphere point");
    Vec g{grads[0].eval(u.data()), grads[1].eval(u.data()), grads[2].eval(u.data())};
    const double radial = static_cast<double>(l) * p.eval(u.data());
    for (int i = 0; i < 3; ++i) g[i] -= radial * u[i];
    return g;
  };
}

// The same gradient rotated 90 degrees about the radial axis: u x grad p(u).
inline std::function<Vec(const UnitVector&)> rotated_gradient_field(int l, int m, Part part) {
  if (l < 1) throw std::invalid_argument("tangential harmonic fields need l >= 1");
  const Polynomial3 p = solid_harmonic(l, m, part);
  const auto grads = p.gradient();
  return [grads](const UnitVector& u) {
    if (u.dim() != 3) throw std::invalid_argument("harmonic field needs a 3-sphere point");
    const Vec g{grads[0].eval(u.data()), grads[1].eval(u.data()), grads[2].eval(u.data())};
    return detail::cross(u.data(), g);
  };
}

}  // namespace sphray::harmonics
