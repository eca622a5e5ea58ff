#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sphray/sampling.hpp"
#include "sphray/sphere_geom.hpp"
#include "sphray/vec.hpp"

// Homogeneous covector fields on R^n \ {0} of negative integer degree,
// stored as their restriction to the unit sphere and extended by
// B(x) = |x|^degree B(x/|x|).  Classical symbols are ordered lists of such
// terms with degrees decreasing by one.

namespace sphray::fields {

using geom::UnitVector;

// One-form of homogeneous degree `degree` < 0.  The aradial flag marks fields
// whose pairing with the radial direction vanishes; it is only ever set after
// a sampled check (100 quasi-random points, tolerance 1e-10).
class HomogeneousOneForm {
 public:
  using Evaluator = std::function<Vec(const UnitVector&)>;

  HomogeneousOneForm(int degree, int dim, Evaluator on_sphere)
      : degree_(degree), dim_(dim), on_sphere_(std::move(on_sphere)) {
    if (degree_ >= 0) throw std::invalid_argument("homogeneous degree must be negative");
    if (dim_ < 2) throw std::invalid_argument("one-form needs dimension >= 2");
    if (!on_sphere_) throw std::invalid_argument("one-form needs an evaluator");
  }

  static HomogeneousOneForm zero(int degree, int dim) {
    HomogeneousOneForm f(degree, dim, [dim](const UnitVector&) { return Vec(dim, 0.0); });
    f.aradial_ = true;
    return f;
  }

  int degree() const { return degree_; }
  int dim() const { return dim_; }
  bool is_aradial() const { return aradial_; }

  // Covector components at a point on the unit sphere.
  Vec on_sphere(const UnitVector& u) const {
    if (u.dim() != dim_) throw std::invalid_argument("point/form dimension mismatch");
    Vec v = on_sphere_(u);
    if (static_cast<int>(v.size()) != dim_) {
      throw std::runtime_error("one-form evaluator returned wrong dimension");
    }
    return v;
  }

  // Runs the sampled radial-pairing check and returns a copy with the
  // aradial flag set; throws if the check fails.
  HomogeneousOneForm checked_aradial() const {
    const auto pts = sampling::quasi_uniform_sphere(dim_, 100);
    double worst = 0.0;
    for (const auto& u : pts) {
      worst = std::max(worst, std::abs(dot(on_sphere(u), u.data())));
    }
    if (worst > 1e-10) {
      throw std::domain_error("one-form failed the sampled aradial check, worst pairing " +
                              std::to_string(worst));
    }
    HomogeneousOneForm f(*this);
    f.aradial_ = true;
    return f;
  }

 private:
  int degree_;
  int dim_;
  Evaluator on_sphere_;
  bool aradial_ = false;
};

// Scalar of homogeneous degree `degree` < 0.
class HomogeneousScalar {
 public:
  using Evaluator = std::function<double(const UnitVector&)>;

  HomogeneousScalar(int degree, int dim, Evaluator on_sphere)
      : degree_(degree), dim_(dim), on_sphere_(std::move(on_sphere)) {
    if (degree_ >= 0) throw std::invalid_argument("homogeneous degree must be negative");
    if (dim_ < 2) throw std::invalid_argument("scalar needs dimension >= 2");
    if (!on_sphere_) throw std::invalid_argument("scalar needs an evaluator");
  }

  static HomogeneousScalar zero(int degree, int dim) {
    return HomogeneousScalar(degree, dim, [](const UnitVector&) { return 0.0; });
  }

  int degree() const { return degree_; }
  int dim() const { return dim_; }

  double on_sphere(const UnitVector& u) const {
    if (u.dim() != dim_) throw std::invalid_argument("point/scalar dimension mismatch");
    return on_sphere_(u);
  }

 private:
  int degree_;
  int dim_;
  Evaluator on_sphere_;
};

// Value of the homogeneous extension at any x != 0.
inline Vec evaluate_oneform(const HomogeneousOneForm& B, const Vec& x) {
  const double r = norm(x);
  if (r == 0.0) throw std::domain_error("homogeneous one-form is singular at the origin");
  const Vec u = scaled(x, 1.0 / r);
  return scaled(B.on_sphere(UnitVector::normalized(u)), std::pow(r, B.degree()));
}

inline double evaluate_scalar(const HomogeneousScalar& q, const Vec& x) {
  const double r = norm(x);
  if (r == 0.0) throw std::domain_error("homogeneous scalar is singular at the origin");
  const Vec u = scaled(x, 1.0 / r);
  return q.on_sphere(UnitVector::normalized(u)) * std::pow(r, q.degree());
}

// Pointwise pairing <B(x), w>.
inline double pair(const HomogeneousOneForm& B, const Vec& x, const Vec& w) {
  return dot(evaluate_oneform(B, x), w);
}

// Tangential part: subtracts the radial component at every sphere point.
// The result carries a verified aradial flag.
inline HomogeneousOneForm aradial_project(const HomogeneousOneForm& B) {
  auto base = B;
  HomogeneousOneForm projected(
      B.degree(), B.dim(), [base](const UnitVector& u) {
        Vec v = base.on_sphere(u);
        axpy(v, -dot(v, u.data()), u.data());
        return v;
      });
  return projected.checked_aradial();
}

// c1 * B1 + c2 * B2 + ... with matching degrees and dimensions.
inline HomogeneousOneForm combine(const std::vector<std::pair<double, HomogeneousOneForm>>& terms) {
  if (terms.empty()) throw std::invalid_argument("empty linear combination");
  const int degree = terms.front().second.degree();
  const int dim = terms.front().second.dim();
  bool aradial = true;
  for (const auto& [c, f] : terms) {
    (void)c;
    if (f.degree() != degree || f.dim() != dim) {
      throw std::invalid_argument("linear combination mixes degrees or dimensions");
    }
    aradial = aradial && f.is_aradial();
  }
  HomogeneousOneForm out(degree, dim, [terms, dim](const UnitVector& u) {
    Vec v(dim, 0.0);
    for (const auto& [c, f] : terms) axpy(v, c, f.on_sphere(u));
    return v;
  });
  return aradial ? out.checked_aradial() : out;
}

// Pushforward under a rotation: (R.B)(u) = R B(R^T u), same degree.
inline HomogeneousOneForm rotate_form(const geom::Rotation& R, const HomogeneousOneForm& B) {
  if (R.dim() != B.dim()) throw std::invalid_argument("rotation/form dimension mismatch");
  const geom::Rotation Rt = R.transpose();
  auto base = B;
  HomogeneousOneForm out(B.degree(), B.dim(), [R, Rt, base](const UnitVector& u) {
    return R.apply(base.on_sphere(Rt.apply(u)));
  });
  return B.is_aradial() ? out.checked_aradial() : out;
}

// Classical symbol: terms of strictly decreasing degree order, order-1, ...
template <class Term>
struct ClassicalSymbol {
  ClassicalSymbol(int order_, std::vector<Term> terms_)
      : order(order_), terms(std::move(terms_)) {
    if (terms.empty()) throw std::invalid_argument("classical symbol needs at least one term");
    for (std::size_t i = 0; i < terms.size(); ++i) {
      if (terms[i].degree() != order - static_cast<int>(i)) {
        throw std::invalid_argument("classical symbol terms must step down in degree");
      }
    }
  }

  int order;
  std::vector<Term> terms;
};

using OneFormSymbol = ClassicalSymbol<HomogeneousOneForm>;
using ScalarSymbol = ClassicalSymbol<HomogeneousScalar>;

// Difference of two vector potentials at its leading nonvanishing degree -k.
struct PotentialDifference {
  PotentialDifference(int k_, HomogeneousOneForm lead_) : k(k_), lead(std::move(lead_)) {
    if (k < 2) throw std::invalid_argument("difference order k must be >= 2");
    if (lead.degree() != -k) {
      throw std::invalid_argument("difference lead must have degree -k");
    }
  }

  int k;
  HomogeneousOneForm lead;
};

// Leading nonzero term of A - A', scanned level by level; a level counts as
// zero when its components stay below 1e-12 on a 64-point sampled grid.
// Returns nullopt when every stored level vanishes.
inline std::optional<PotentialDifference> difference_lead(const OneFormSymbol& A,
                                                          const OneFormSymbol& Ap) {
  if (A.order != Ap.order) throw std::invalid_argument("symbol orders differ");
  if (A.order > -2) {
    throw std::invalid_argument("difference order k must be >= 2, so symbol order must be <= -2");
  }
  if (A.terms.size() != Ap.terms.size()) {
    throw std::invalid_argument("symbols store different numbers of terms");
  }
  const int dim = A.terms.front().dim();
  const auto pts = sampling::quasi_uniform_sphere(dim, 64);
  for (std::size_t level = 0; level < A.terms.size(); ++level) {
    const auto& a = A.terms[level];
    const auto& b = Ap.terms[level];
    double worst = 0.0;
    for (const auto& u : pts) {
      worst = std::max(worst, max_abs(sub(a.on_sphere(u), b.on_sphere(u))));
    }
    if (worst > 1e-12) {
      HomogeneousOneForm diff(a.degree(), dim, [a, b](const UnitVector& u) {
        return sub(a.on_sphere(u), b.on_sphere(u));
      });
      return PotentialDifference(-a.degree(), std::move(diff));
    }
  }
  return std::nullopt;
}

}  // namespace sphray::fields
