#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

#include "sphray/fields.hpp"
#include "sphray/quadrature.hpp"
#include "sphray/sphere_geom.hpp"
#include "sphray/transport.hpp"

// Weighted great-circle transform
//
//   I_k[B](gamma) = integral_0^pi <B(gamma(s)), gamma'(s)> sin^{k-1}(s) ds
//
// and the leading profile of the difference of Poisson operators, whose
// (pi - s)^{1-k} singularity carries I_k[B] as its coefficient.

namespace sphray::raytransform {

using geom::Geodesic;
using geom::UnitVector;
using quad::kPi;
using Complex = std::complex<double>;

struct RayTransformSample {
  Geodesic geodesic;
  int k;
  double value;
};

// I_k of the difference lead along one geodesic.
inline RayTransformSample weighted_transform(const fields::PotentialDifference& B,
                                             const Geodesic& g, int panels = 64,
                                             int points_per_panel = 10) {
  if (B.lead.dim() != g.omega.dim()) {
    throw std::invalid_argument("field/geodesic dimension mismatch");
  }
  const int k = B.k;
  const auto lead = B.lead;
  std::function<double(double)> integrand = [lead, g, k](double s) {
    const UnitVector p = geom::geodesic_point(g, s);
    return dot(lead.on_sphere(p), geom::geodesic_velocity(g, s)) *
           std::pow(std::sin(s), k - 1);
  };
  const double value = quad::integrate<double>(integrand, 0.0, kPi, panels, points_per_panel);
  return RayTransformSample{g, k, value};
}

// Profile s -> value of the leading term along one geodesic at radius r.
class LeadTermProfile {
 public:
  LeadTermProfile(int k, double r, std::function<Complex(double)> evaluator)
      : k_(k), r_(r), eval_(std::move(evaluator)) {
    if (k_ < 2) throw std::invalid_argument("lead profile needs k >= 2");
    if (!(r_ > 0.0)) throw std::invalid_argument("lead profile needs r > 0");
  }

  int k() const { return k_; }
  double r() const { return r_; }

  Complex operator()(double s) const {
    if (!(s > 0.0 && s < kPi)) {
      throw std::domain_error("lead profile is defined on (0, pi)");
    }
    return eval_(s);
  }

 private:
  int k_;
  double r_;
  std::function<Complex(double)> eval_;
};

// Invariant form of the lead profile,
//   i r^{1-k} / (2 sin^{k-1} s) * integral_0^s <B(gamma), gamma'> sin^{k-1} ds',
// which is independent of the spectral parameter.
inline LeadTermProfile poisson_difference_lead(const fields::PotentialDifference& B, double r,
                                               const Geodesic& g, int panels = 64,
                                               int points_per_panel = 10) {
  if (B.lead.dim() != g.omega.dim()) {
    throw std::invalid_argument("field/geodesic dimension mismatch");
  }
  const int k = B.k;
  const auto lead = B.lead;
  std::function<double(double)> integrand = [lead, g, k](double s) {
    const UnitVector p = geom::geodesic_point(g, s);
    return dot(lead.on_sphere(p), geom::geodesic_velocity(g, s)) *
           std::pow(std::sin(s), k - 1);
  };
  const double scale = std::pow(r, 1 - k);
  auto eval = [integrand, scale, k, panels, points_per_panel](double s) {
    const double partial = quad::integrate<double>(integrand, 0.0, s, panels, points_per_panel);
    return Complex(0.0, 1.0) * scale * partial / (2.0 * std::pow(std::sin(s), k - 1));
  };
  return LeadTermProfile(k, r, eval);
}

// Forcing form of the same profile,
//   i r^{1-k} / (2 lambda sin^{k-1} s) * integral_0^s W_{-k} sin^{k-2} ds',
// built from the level k-1 forcing; for aradial B it agrees with the
// invariant form and lambda cancels exactly.
inline LeadTermProfile poisson_difference_lead_from_forcing(const fields::PotentialDifference& B,
                                                            double r, const Geodesic& g,
                                                            double lambda, int panels = 64,
                                                            int points_per_panel = 10) {
  const transport::ForcingTerm w = transport::forcing_wk(B, lambda, g.omega);
  const int k = B.k;
  const UnitVector theta = g.tangent;
  std::function<double(double)> integrand = [w, theta, k](double s) {
    return w.values(s, theta).real() * std::pow(std::sin(s), k - 2);
  };
  const double scale = std::pow(r, 1 - k);
  auto eval = [integrand, scale, k, lambda, panels, points_per_panel](double s) {
    const double partial = quad::integrate<double>(integrand, 0.0, s, panels, points_per_panel);
    return Complex(0.0, 1.0) * scale * partial /
           (2.0 * lambda * std::pow(std::sin(s), k - 1));
  };
  return LeadTermProfile(k, r, eval);
}

// Largest gap between the invariant and forcing forms over an s grid; for
// aradial B this should sit at rounding level for any lambda.
inline double lambda_cancellation_gap(const fields::PotentialDifference& B, double r,
                                      const Geodesic& g, double lambda,
                                      const std::vector<double>& s_grid) {
  const LeadTermProfile invariant = poisson_difference_lead(B, r, g);
  const LeadTermProfile forcing = poisson_difference_lead_from_forcing(B, r, g, lambda);
  double worst = 0.0;
  for (double s : s_grid) worst = std::max(worst, std::abs(invariant(s) - forcing(s)));
  return worst;
}

// Limit of (pi - s)^{k-1} * profile(s) as s -> pi-, extracted by polynomial
// extrapolation over the ladder s = pi - 2^{-m}, m = 6..16.  Convergence is
// declared once successive estimates differ by at most 1e-9; otherwise the
// ladder is reported in the error.  The limit equals i r^{1-k} / 2 * I_k[B].
inline Complex lead_singularity_coefficient(const LeadTermProfile& profile) {
  const int m_lo = 6, m_hi = 16;
  const int k = profile.k();
  std::vector<double> nodes;
  std::vector<Complex> diag;       // Neville diagonal, one entry per ladder row
  std::vector<Complex> prev_row;   // previous tableau row
  Complex last{};
  for (int m = m_lo; m <= m_hi; ++m) {
    const double delta = std::ldexp(1.0, -m);
    const Complex value = std::pow(delta, k - 1) * profile(kPi - delta);
    std::vector<Complex> row(prev_row.size() + 1);
    row[0] = value;
    nodes.push_back(delta);
    const std::size_t i = nodes.size() - 1;
    for (std::size_t j = 1; j <= i; ++j) {
      const double xi = nodes[i];
      const double xij = nodes[i - j];
      row[j] = ((0.0 - xij) * row[j - 1] - (0.0 - xi) * prev_row[j - 1]) / (xi - xij);
    }
    const Complex estimate = row.back();
    diag.push_back(estimate);
    if (i > 0 && std::abs(estimate - last) <= 1e-9) return estimate;
    last = estimate;
    prev_row = std::move(row);
  }
  std::ostringstream msg;
  msg << "singularity coefficient extrapolation did not converge; ladder:";
  for (const Complex& c : diag) msg << " (" << c.real() << "," << c.imag() << ")";
  throw std::runtime_error(msg.str());
}

// Transform table over an omega grid with a fixed number of tangents per
// omega; rows are omega-major, tangent-minor, in the order given.
inline std::vector<RayTransformSample> transform_grid(const fields::PotentialDifference& B,
                                                      const std::vector<UnitVector>& omegas,
                                                      int tangents_per_omega, int panels = 64,
                                                      int points_per_panel = 10) {
  if (omegas.empty()) throw std::invalid_argument("transform grid needs at least one omega");
  std::vector<RayTransformSample> table;
  table.reserve(omegas.size() * static_cast<std::size_t>(tangents_per_omega));
  for (std::size_t i = 0; i < omegas.size(); ++i) {
    const auto tangents = geom::tangent_circle(omegas[i], tangents_per_omega);
    for (std::size_t j = 0; j < tangents.size(); ++j) {
      try {
        table.push_back(
            weighted_transform(B, Geodesic(omegas[i], tangents[j]), panels, points_per_panel));
      } catch (const std::exception& e) {
        throw std::runtime_error("transform grid failed at omega " + std::to_string(i) +
                                 ", tangent " + std::to_string(j) + ": " + e.what());
      }
    }
  }
  return table;
}

}  // namespace sphray::raytransform
