#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <utility>
#include <vector>

#include "sphray/fields.hpp"
#include "sphray/quadrature.hpp"
#include "sphray/sphere_geom.hpp"

// Transport-equation hierarchy along great circles: level-j solutions
//
//   a_j(s, theta) = i / (2 lambda sin^j s) * integral_0^s sin^{j-1}(s') d(s', theta) ds'
//
// driven by forcing terms built from the potential data.  Solutions satisfy
//   2 i lambda [sin(s) d/ds + j cos(s)] a_j + d = 0,
// which the finite-difference residual oracle checks directly.

namespace sphray::transport {

using geom::Geodesic;
using geom::UnitVector;
using quad::kPi;
using Complex = std::complex<double>;

// Level-j forcing profile for a fixed axis omega, as a function of arclength
// and the tangent direction theta.  claimed_growth g records the bound
// values = O((pi - s)^g) near the far pole.
struct ForcingTerm {
  int level;
  std::function<Complex(double s, const UnitVector& theta)> values;
  int claimed_growth = 0;
};

// Uniform breakpoint grid used for the solution caches.
inline std::vector<double> uniform_grid(double a, double b, int points) {
  if (points < 2) throw std::invalid_argument("grid needs at least two points");
  std::vector<double> g(points);
  for (int i = 0; i < points; ++i) g[i] = a + (b - a) * i / (points - 1);
  g.back() = b;
  return g;
}

struct SolveOptions {
  std::vector<double> s_grid = uniform_grid(0.0, kPi, 257);
  int points_per_panel = 10;
};

// Lazily cached evaluator for a_j; one cumulative integral per tangent.
// Cache population is internally synchronized.
class TransportSolution {
 public:
  TransportSolution(int level, double lambda, ForcingTerm forcing, SolveOptions opts = {})
      : level_(level),
        lambda_(lambda),
        forcing_(std::move(forcing)),
        opts_(std::move(opts)),
        cache_(std::make_shared<Cache>()) {
    if (level_ < 1) throw std::invalid_argument("transport level must be >= 1");
    if (!(lambda_ > 0.0)) throw std::invalid_argument("lambda must be positive");
    if (opts_.s_grid.front() != 0.0 || opts_.s_grid.back() != kPi) {
      throw std::invalid_argument("solution grid must span [0, pi]");
    }
  }

  int level() const { return level_; }
  double lambda() const { return lambda_; }
  // Blow-up exponent of the represented solution at s = pi: a_j = O((pi-s)^{-j})
  // provided the forcing grows no faster than (pi - s)^{1-j}.
  int growth() const { return -level_; }
  const ForcingTerm& forcing() const { return forcing_; }

  // Value at (s, theta); s = 0 returns the finite limit i d(0) / (2 lambda j).
  Complex operator()(double s, const UnitVector& theta) const {
    if (!(s >= 0.0 && s < kPi)) {
      throw std::domain_error("transport solution is defined on [0, pi)");
    }
    if (s == 0.0) {
      return Complex(0.0, 1.0) * forcing_.values(0.0, theta) / (2.0 * lambda_ * level_);
    }
    const auto& cumulative = cached(theta);
    const Complex integral = cumulative(s);
    const double sj = std::pow(std::sin(s), level_);
    return Complex(0.0, 1.0) * integral / (2.0 * lambda_ * sj);
  }

 private:
  using Cumulative = quad::CumulativeIntegral<Complex>;
  struct Cache {
    std::mutex mutex;
    std::map<Vec, std::shared_ptr<Cumulative>> per_theta;
  };

  const Cumulative& cached(const UnitVector& theta) const {
    std::lock_guard<std::mutex> lock(cache_->mutex);
    auto it = cache_->per_theta.find(theta.data());
    if (it == cache_->per_theta.end()) {
      const int j = level_;
      auto f = forcing_.values;
      auto integrand = [f, j, theta](double s) {
        return std::pow(std::sin(s), j - 1) * f(s, theta);
      };
      it = cache_->per_theta
               .emplace(theta.data(), std::make_shared<Cumulative>(integrand, opts_.s_grid,
                                                                   opts_.points_per_panel))
               .first;
    }
    return *it->second;
  }

  int level_;
  double lambda_;
  ForcingTerm forcing_;
  SolveOptions opts_;
  std::shared_ptr<Cache> cache_;
};

// Level-1 forcing W_{-2} = -lambda sum_j omega_j A_j^{(-2)} - q_{-2} evaluated
// along the geodesic from omega with tangent theta.
inline ForcingTerm forcing_w2(const fields::HomogeneousOneForm& A_lead,
                              const fields::HomogeneousScalar& q_lead, double lambda,
                              const UnitVector& omega) {
  if (A_lead.degree() != -2 || q_lead.degree() != -2) {
    throw std::invalid_argument("level-1 forcing needs degree -2 lead terms");
  }
  if (A_lead.dim() != omega.dim() || q_lead.dim() != omega.dim()) {
    throw std::invalid_argument("forcing data dimension mismatch");
  }
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  ForcingTerm w;
  w.level = 1;
  w.claimed_growth = 0;
  w.values = [A_lead, q_lead, lambda, omega](double s, const UnitVector& theta) {
    const UnitVector p = geom::geodesic_point(Geodesic(omega, theta), s);
    return Complex(-lambda * dot(A_lead.on_sphere(p), omega.data()) - q_lead.on_sphere(p), 0.0);
  };
  return w;
}

// Level k-1 forcing W_{-k} = -lambda sum_j omega_j B_j^{(-k)} for the leading
// term of a difference of potentials.
inline ForcingTerm forcing_wk(const fields::PotentialDifference& B, double lambda,
                              const UnitVector& omega) {
  if (B.lead.dim() != omega.dim()) throw std::invalid_argument("forcing data dimension mismatch");
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  ForcingTerm w;
  w.level = B.k - 1;
  w.claimed_growth = 0;
  const auto lead = B.lead;
  w.values = [lead, lambda, omega](double s, const UnitVector& theta) {
    const UnitVector p = geom::geodesic_point(Geodesic(omega, theta), s);
    return Complex(-lambda * dot(lead.on_sphere(p), omega.data()), 0.0);
  };
  return w;
}

// First-level solution a_{-1}(s) = i / (2 lambda sin s) * integral_0^s W.
inline TransportSolution solve_first(const ForcingTerm& W, double lambda, SolveOptions opts = {}) {
  if (W.level != 1) throw std::invalid_argument("solve_first expects a level-1 forcing");
  return TransportSolution(1, lambda, W, std::move(opts));
}

// Level-j solution for the forcing in its level slot.
inline TransportSolution solve_step(const ForcingTerm& d, double lambda, SolveOptions opts = {}) {
  return TransportSolution(d.level, lambda, d, std::move(opts));
}

// Max over the grid of |2 i lambda (sin(s) a' + j cos(s) a) + d| with a'
// taken by centered finite difference, step h = 1e-6: small enough that the
// h^2 truncation term stays below 1e-8 for levels <= 3 up to s = pi - 0.2,
// while FD roundoff stays near 1e-9.  This is the normative sign-convention
// check for the whole module.
inline double residual(const TransportSolution& a, const ForcingTerm& d, int j, double lambda,
                       const std::vector<double>& s_grid, const UnitVector& theta) {
  const double h = 1e-6;
  double worst = 0.0;
  for (double s : s_grid) {
    if (!(s - h > 0.0 && s + h < kPi)) {
      throw std::domain_error("residual grid point too close to the poles for the h = 1e-6 stencil");
    }
    const Complex da = (a(s + h, theta) - a(s - h, theta)) / (2.0 * h);
    const Complex lhs =
        Complex(0.0, 2.0 * lambda) * (std::sin(s) * da + j * std::cos(s) * a(s, theta)) +
        d.values(s, theta);
    worst = std::max(worst, std::abs(lhs));
  }
  return worst;
}

// Fitted blow-up exponent of |a| at s = pi over a geometric ladder inside
// [window_lo, window_hi].
struct GrowthWindow {
  double s_lo = kPi - 1e-2;
  double s_hi = kPi - 1e-6;
  int samples = 16;
};

inline double growth_check(const TransportSolution& a, const UnitVector& theta,
                           const GrowthWindow& window = {}) {
  auto f = [&a, &theta](double s) { return std::abs(a(s, theta)); };
  return quad::endpoint_exponent(f, window.s_lo, window.s_hi, window.samples);
}

struct CascadeConfig {
  double lambda = 1.0;
  int max_level = 3;
  std::vector<UnitVector> theta_grid;
  SolveOptions solve_opts = {};
  double residual_tol = 1e-7;
  // Residual gate window; kept away from s = pi because the (pi - s)^{-j}
  // blow-up amplifies the finite-difference truncation of the oracle.
  double residual_lo = 0.05;
  double residual_hi = kPi - 0.7;
  int residual_points = 40;
};

using ForcingSource =
    std::function<ForcingTerm(int level, const std::vector<TransportSolution>& lower)>;

// Runs levels 1..max_level, checking the residual gate at every level and
// every tangent; aborts with the offending level on failure.
inline std::vector<TransportSolution> cascade(const CascadeConfig& config,
                                              const ForcingSource& source) {
  if (config.max_level < 1) throw std::invalid_argument("cascade needs max_level >= 1");
  if (config.theta_grid.empty()) throw std::invalid_argument("cascade needs a tangent grid");
  std::vector<double> gate;
  for (int i = 0; i < config.residual_points; ++i) {
    gate.push_back(config.residual_lo +
                   (config.residual_hi - config.residual_lo) * i / (config.residual_points - 1));
  }
  std::vector<TransportSolution> out;
  out.reserve(config.max_level);
  for (int j = 1; j <= config.max_level; ++j) {
    ForcingTerm d = source(j, out);
    if (d.level != j) throw std::invalid_argument("forcing source returned the wrong level");
    TransportSolution a = solve_step(d, config.lambda, config.solve_opts);
    for (const auto& theta : config.theta_grid) {
      const double r = residual(a, d, j, config.lambda, gate, theta);
      if (r > config.residual_tol) {
        throw std::runtime_error("cascade aborted: residual " + std::to_string(r) +
                                 " above tolerance at level " + std::to_string(j));
      }
    }
    out.push_back(std::move(a));
  }
  return out;
}

}  // namespace sphray::transport
