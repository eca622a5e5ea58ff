#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "sphray/sphere_geom.hpp"

// Deterministic point sets and random draws.  Everything here is seeded and
// implementation-independent so repeated runs produce identical bytes.

namespace sphray::sampling {

using geom::UnitVector;
using quad::kPi;

// 64-bit SplitMix generator; used instead of std::uniform_* distributions so
// streams do not depend on the standard library implementation.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal via Marsaglia polar rejection.
  double normal() {
    for (;;) {
      const double a = uniform(-1.0, 1.0);
      const double b = uniform(-1.0, 1.0);
      const double q = a * a + b * b;
      if (q > 0.0 && q < 1.0) return a * std::sqrt(-2.0 * std::log(q) / q);
    }
  }

  UnitVector sphere_point(int n) {
    Vec v(n);
    for (;;) {
      for (double& x : v) x = normal();
      const double r = norm(v);
      if (r > 1e-6) {
        for (double& x : v) x /= r;
        return UnitVector(v);
      }
    }
  }

  // Random geodesic: uniform start, uniform tangent in its tangent space.
  geom::Geodesic geodesic(int n) {
    const UnitVector omega = sphere_point(n);
    for (;;) {
      Vec v = sphere_point(n).data();
      axpy(v, -dot(v, omega.data()), omega.data());
      const double r = norm(v);
      if (r > 1e-6) {
        for (double& x : v) x /= r;
        return geom::Geodesic(omega, UnitVector(v));
      }
    }
  }

 private:
  std::uint64_t state_;
};

// Low-discrepancy points on the sphere: golden-angle spiral for n = 3,
// equally spaced angles for n = 2, seeded random otherwise.
inline std::vector<UnitVector> quasi_uniform_sphere(int n, int count) {
  if (count < 1) throw std::invalid_argument("point count must be >= 1");
  std::vector<UnitVector> pts;
  pts.reserve(count);
  if (n == 2) {
    for (int i = 0; i < count; ++i) {
      const double phi = 2.0 * kPi * i / count + 0.5 / count;
      pts.push_back(UnitVector({std::cos(phi), std::sin(phi)}));
    }
    return pts;
  }
  if (n == 3) {
    const double golden = kPi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < count; ++i) {
      const double z = 1.0 - (2.0 * i + 1.0) / count;
      const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double phi = golden * i;
      pts.push_back(UnitVector::normalized({rho * std::cos(phi), rho * std::sin(phi), z}));
    }
    return pts;
  }
  Rng rng(0x5bd1e995u ^ static_cast<std::uint64_t>(n));
  for (int i = 0; i < count; ++i) pts.push_back(rng.sphere_point(n));
  return pts;
}

namespace detail {

// Sign of det for a small row-major matrix, by Gaussian elimination.
inline double det_sign(std::vector<Vec> rows) {
  const int n = static_cast<int>(rows.size());
  double sign = 1.0;
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r) {
      if (std::abs(rows[r][col]) > std::abs(rows[pivot][col])) pivot = r;
    }
    if (rows[pivot][col] == 0.0) return 0.0;
    if (pivot != col) {
      std::swap(rows[pivot], rows[col]);
      sign = -sign;
    }
    if (rows[col][col] < 0.0) sign = -sign;
    for (int r = col + 1; r < n; ++r) {
      const double factor = rows[r][col] / rows[col][col];
      for (int c = col; c < n; ++c) rows[r][c] -= factor * rows[col][c];
    }
  }
  return sign;
}

}  // namespace detail

// Haar-ish random rotation: Gram-Schmidt of Gaussian rows, then the last row
// is negated if needed so the determinant is +1.
inline geom::Rotation random_rotation(Rng& rng, int n) {
  if (n < 2) throw std::invalid_argument("rotations need dimension >= 2");
  for (;;) {
    std::vector<Vec> rows;
    bool degenerate = false;
    for (int i = 0; i < n && !degenerate; ++i) {
      Vec v(n);
      for (double& x : v) x = rng.normal();
      for (const Vec& prev : rows) axpy(v, -dot(v, prev), prev);
      const double r = norm(v);
      if (r < 1e-3) {
        degenerate = true;
        break;
      }
      for (double& x : v) x /= r;
      // A second orthogonalization sweep keeps the dot products at rounding
      // level even when the first projection removed most of the vector.
      for (const Vec& prev : rows) axpy(v, -dot(v, prev), prev);
      const double r2 = norm(v);
      for (double& x : v) x /= r2;
      rows.push_back(v);
    }
    if (degenerate) continue;
    if (detail::det_sign(rows) < 0.0) {
      for (double& x : rows[n - 1]) x *= -1.0;
    }
    Vec flat(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) flat[static_cast<std::size_t>(i) * n + j] = rows[i][j];
    }
    return geom::Rotation(n, std::move(flat));
  }
}

}  // namespace sphray::sampling
