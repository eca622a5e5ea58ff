#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

// Small dense vector helpers shared by the geometry and field layers.
// All functions are dimension-generic and throw on mismatched sizes.

namespace sphray {

using Vec = std::vector<double>;

inline void check_same_dim(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("vector dimension mismatch");
  }
}

inline double dot(const Vec& a, const Vec& b) {
  check_same_dim(a, b);
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

inline Vec scaled(const Vec& a, double c) {
  Vec r(a);
  for (double& x : r) x *= c;
  return r;
}

inline Vec add(const Vec& a, const Vec& b) {
  check_same_dim(a, b);
  Vec r(a);
  for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  return r;
}

inline Vec sub(const Vec& a, const Vec& b) {
  check_same_dim(a, b);
  Vec r(a);
  for (std::size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
  return r;
}

// r += c * a
inline void axpy(Vec& r, double c, const Vec& a) {
  check_same_dim(r, a);
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += c * a[i];
}

inline double max_abs(const Vec& a) {
  double m = 0.0;
  for (double x : a) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace sphray
