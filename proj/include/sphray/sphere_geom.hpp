#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "sphray/quadrature.hpp"
#include "sphray/vec.hpp"

// Great-circle geometry on the unit sphere in R^n: unit vectors, proper
// rotations, geodesics gamma(s) = cos(s) omega + sin(s) v, and beam
// coordinates (r, s, theta) about a fixed direction omega.

namespace sphray::geom {

using quad::kPi;

// Vector on the unit sphere; the norm is validated to 1e-12 on construction.
class UnitVector {
 public:
  explicit UnitVector(Vec v) : v_(std::move(v)) {
    if (v_.size() < 2) throw std::invalid_argument("unit vector needs dimension >= 2");
    if (std::abs(norm(v_) - 1.0) > 1e-12) {
      throw std::invalid_argument("vector is not unit length");
    }
  }

  static UnitVector normalized(Vec v) {
    const double n = norm(v);
    if (n == 0.0) throw std::domain_error("cannot normalize the zero vector");
    for (double& x : v) x /= n;
    return UnitVector(std::move(v));
  }

  // Standard basis vector e_i (0-based) in dimension n.
  static UnitVector axis(int n, int i) {
    if (n < 2 || i < 0 || i >= n) throw std::invalid_argument("bad axis index");
    Vec v(n, 0.0);
    v[i] = 1.0;
    return UnitVector(std::move(v));
  }

  int dim() const { return static_cast<int>(v_.size()); }
  double operator[](int i) const { return v_[i]; }
  const Vec& data() const { return v_; }

 private:
  Vec v_;
};

// Proper rotation: orthogonality is validated to 1e-12 and the determinant
// to +1 within 1e-10 on construction.
class Rotation {
 public:
  Rotation(int n, std::vector<double> row_major) : n_(n), m_(std::move(row_major)) {
    if (n_ < 2 || m_.size() != static_cast<std::size_t>(n_) * n_) {
      throw std::invalid_argument("rotation matrix has wrong shape");
    }
    for (int i = 0; i < n_; ++i) {
      for (int j = 0; j < n_; ++j) {
        double s = 0.0;
        for (int l = 0; l < n_; ++l) s += at(i, l) * at(j, l);
        const double expect = (i == j) ? 1.0 : 0.0;
        if (std::abs(s - expect) > 1e-12) {
          throw std::invalid_argument("matrix is not orthogonal");
        }
      }
    }
    if (std::abs(determinant() - 1.0) > 1e-10) {
      throw std::invalid_argument("matrix is not a proper rotation (det != +1)");
    }
  }

  static Rotation identity(int n) {
    std::vector<double> m(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) m[static_cast<std::size_t>(i) * n + i] = 1.0;
    return Rotation(n, std::move(m));
  }

  int dim() const { return n_; }
  double at(int i, int j) const { return m_[static_cast<std::size_t>(i) * n_ + j]; }

  Vec apply(const Vec& x) const {
    if (static_cast<int>(x.size()) != n_) {
      throw std::invalid_argument("rotation/vector dimension mismatch");
    }
    Vec y(n_, 0.0);
    for (int i = 0; i < n_; ++i) {
      double s = 0.0;
      for (int j = 0; j < n_; ++j) s += at(i, j) * x[j];
      y[i] = s;
    }
    return y;
  }

  UnitVector apply(const UnitVector& u) const { return UnitVector::normalized(apply(u.data())); }

  Rotation transpose() const {
    std::vector<double> t(m_.size());
    for (int i = 0; i < n_; ++i) {
      for (int j = 0; j < n_; ++j) t[static_cast<std::size_t>(j) * n_ + i] = at(i, j);
    }
    return Rotation(n_, std::move(t));
  }

  Rotation compose(const Rotation& other) const {
    if (other.n_ != n_) throw std::invalid_argument("rotation dimension mismatch");
    std::vector<double> p(m_.size(), 0.0);
    for (int i = 0; i < n_; ++i) {
      for (int l = 0; l < n_; ++l) {
        const double a = at(i, l);
        for (int j = 0; j < n_; ++j) p[static_cast<std::size_t>(i) * n_ + j] += a * other.at(l, j);
      }
    }
    return Rotation(n_, std::move(p));
  }

  // Determinant by LU with partial pivoting; the matrices are tiny.
  double determinant() const {
    std::vector<double> a(m_);
    double det = 1.0;
    for (int c = 0; c < n_; ++c) {
      int pivot = c;
      for (int r = c + 1; r < n_; ++r) {
        if (std::abs(a[static_cast<std::size_t>(r) * n_ + c]) >
            std::abs(a[static_cast<std::size_t>(pivot) * n_ + c])) {
          pivot = r;
        }
      }
      const double p = a[static_cast<std::size_t>(pivot) * n_ + c];
      if (p == 0.0) return 0.0;
      if (pivot != c) {
        for (int j = 0; j < n_; ++j) {
          std::swap(a[static_cast<std::size_t>(pivot) * n_ + j],
                    a[static_cast<std::size_t>(c) * n_ + j]);
        }
        det = -det;
      }
      det *= p;
      for (int r = c + 1; r < n_; ++r) {
        const double f = a[static_cast<std::size_t>(r) * n_ + c] / p;
        for (int j = c; j < n_; ++j) {
          a[static_cast<std::size_t>(r) * n_ + j] -= f * a[static_cast<std::size_t>(c) * n_ + j];
        }
      }
    }
    return det;
  }

 private:
  int n_;
  std::vector<double> m_;  // row-major
};

// Great circle from omega with initial tangent v, arclength parameter
// s in [0, pi]; orthogonality of omega and v is validated to 1e-12.
struct Geodesic {
  Geodesic(UnitVector omega_, UnitVector tangent_)
      : omega(std::move(omega_)), tangent(std::move(tangent_)) {
    if (omega.dim() != tangent.dim()) {
      throw std::invalid_argument("geodesic start and tangent dimension mismatch");
    }
    if (std::abs(dot(omega.data(), tangent.data())) > 1e-12) {
      throw std::invalid_argument("geodesic tangent is not orthogonal to the start point");
    }
  }

  UnitVector omega;
  UnitVector tangent;
};

inline void check_arclength(double s) {
  if (!(s >= 0.0 && s <= kPi)) {
    throw std::domain_error("geodesic parameter must lie in [0, pi]");
  }
}

inline UnitVector geodesic_point(const Geodesic& g, double s) {
  check_arclength(s);
  Vec p = scaled(g.omega.data(), std::cos(s));
  axpy(p, std::sin(s), g.tangent.data());
  return UnitVector::normalized(std::move(p));
}

inline Vec geodesic_velocity(const Geodesic& g, double s) {
  check_arclength(s);
  Vec v = scaled(g.omega.data(), -std::sin(s));
  axpy(v, std::cos(s), g.tangent.data());
  return v;
}

// The same circle traversed backwards: gamma_rev(s) = gamma(pi - s).
inline Geodesic reversed(const Geodesic& g) {
  return Geodesic(UnitVector(scaled(g.omega.data(), -1.0)), g.tangent);
}

// Proper rotation taking omega to the north pole e_n.  A Householder
// reflection sends omega to the numerically farther pole, and a sign-fixing
// reflection restores det = +1 while moving the image to +e_n.  omega = e_n
// yields the identity; omega = -e_n yields a half-turn in the (e_1, e_n)
// plane.
inline Rotation rotate_to_north(const UnitVector& omega) {
  const int n = omega.dim();
  const double wn = omega[n - 1];
  const double sigma = (wn > 0.0) ? -1.0 : 1.0;  // pole the reflection targets

  Vec u(omega.data());
  u[n - 1] -= sigma;
  const double un = norm(u);
  for (double& x : u) x /= un;  // |u| >= sqrt(2), never degenerate

  std::vector<double> m(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      m[static_cast<std::size_t>(i) * n + j] = (i == j ? 1.0 : 0.0) - 2.0 * u[i] * u[j];
    }
  }
  // Compose with the reflection that fixes the image at +e_n and flips the
  // determinant back to +1: negate row 1 when the target was +e_n, row n
  // when it was -e_n.
  const int flip_row = (sigma > 0.0) ? 0 : n - 1;
  for (int j = 0; j < n; ++j) {
    m[static_cast<std::size_t>(flip_row) * n + j] = -m[static_cast<std::size_t>(flip_row) * n + j];
  }
  return Rotation(n, std::move(m));
}

// Beam coordinates of x about omega: radius r = |x|, polar angle s measured
// from omega, and the unit tangent theta at omega pointing toward x.  Within
// 1e-9 of the poles s = 0, pi the tangent is undefined and left empty.
struct BeamCoords {
  double r;
  double s;
  std::optional<UnitVector> theta;
};

inline BeamCoords beam_coords(const Vec& x, const UnitVector& omega) {
  if (static_cast<int>(x.size()) != omega.dim()) {
    throw std::invalid_argument("point/direction dimension mismatch");
  }
  const double r = norm(x);
  if (r == 0.0) throw std::domain_error("beam coordinates are undefined at the origin");

  const Vec u = scaled(x, 1.0 / r);
  const double axial = dot(u, omega.data());
  Vec t(u);
  axpy(t, -axial, omega.data());
  const double tn = norm(t);
  const double s = std::atan2(tn, axial);

  BeamCoords bc{r, s, std::nullopt};
  if (s > 1e-9 && s < kPi - 1e-9) {
    for (double& c : t) c /= tn;
    bc.theta = UnitVector(std::move(t));
  }
  return bc;
}

// Orthonormal tangent directions at omega: rows 1..n-1 of rotate_to_north
// transposed, i.e. preimages of e_1, ..., e_{n-1}.
inline std::vector<UnitVector> tangent_frame(const UnitVector& omega) {
  const Rotation r = rotate_to_north(omega).transpose();
  std::vector<UnitVector> frame;
  frame.reserve(omega.dim() - 1);
  for (int i = 0; i + 1 < omega.dim(); ++i) {
    frame.push_back(r.apply(UnitVector::axis(omega.dim(), i)));
  }
  return frame;
}

// Deterministic family of `count` unit tangents at omega.  In dimension 2 the
// tangent line only admits two directions, which alternate; otherwise the
// directions are equally spaced on the circle spanned by the first two frame
// vectors.
inline std::vector<UnitVector> tangent_circle(const UnitVector& omega, int count) {
  if (count < 1) throw std::invalid_argument("tangent count must be >= 1");
  const auto frame = tangent_frame(omega);
  std::vector<UnitVector> out;
  out.reserve(count);
  if (omega.dim() == 2) {
    for (int i = 0; i < count; ++i) {
      out.push_back(i % 2 == 0 ? frame[0] : UnitVector(scaled(frame[0].data(), -1.0)));
    }
    return out;
  }
  for (int i = 0; i < count; ++i) {
    const double phi = 2.0 * kPi * i / count;
    Vec v = scaled(frame[0].data(), std::cos(phi));
    axpy(v, std::sin(phi), frame[1].data());
    out.push_back(UnitVector::normalized(std::move(v)));
  }
  return out;
}

}  // namespace sphray::geom
