#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sphray/fields.hpp"
#include "sphray/harmonics.hpp"
#include "sphray/ray_transform.hpp"
#include "sphray/sampling.hpp"
#include "sphray/sphere_geom.hpp"

// Least-squares recovery of an aradial lead one-form from weighted-transform
// samples, over finite tangential bases in dimensions 2 and 3.

namespace sphray::inversion {

using geom::Geodesic;
using geom::UnitVector;

// Ordered aradial hypothesis class; every element is tangential on the
// sphere and homogeneous of degree -k.
struct AradialBasis {
  int dim;
  int k;
  std::vector<fields::HomogeneousOneForm> elements;
  std::vector<std::string> labels;
  double gram_min_eigenvalue;  // smallest eigenvalue of the sphere-sampled Gram matrix
};

namespace detail {

// Gram matrix of on-sphere components over a quasi-uniform point set; its
// smallest eigenvalue certifies linear independence of the elements.
inline double gram_floor(const std::vector<fields::HomogeneousOneForm>& elements, int dim) {
  const auto pts = sampling::quasi_uniform_sphere(dim, 400);
  const int n = static_cast<int>(elements.size());
  std::vector<std::vector<Vec>> values(n);
  for (int a = 0; a < n; ++a) {
    values[a].reserve(pts.size());
    for (const auto& u : pts) values[a].push_back(elements[a].on_sphere(u));
  }
  Eigen::MatrixXd gram(n, n);
  for (int a = 0; a < n; ++a) {
    for (int b = a; b < n; ++b) {
      double sum = 0.0;
      for (std::size_t i = 0; i < pts.size(); ++i) sum += dot(values[a][i], values[b][i]);
      gram(a, b) = gram(b, a) = sum / static_cast<double>(pts.size());
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
  return eig.eigenvalues().minCoeff();
}

}  // namespace detail

// n=2: the tangential Fourier family t(u) * trig(m phi), t(u) = (-u2, u1),
// m = 0..max_degree.  n=3: surface gradients and rotated gradients of the
// solid harmonics with 1 <= l <= max_degree.  Elements carry degree -k.
inline AradialBasis build_basis(int dim, int k, int max_degree) {
  if (dim != 2 && dim != 3) {
    throw std::invalid_argument("basis construction supports dimensions 2 and 3 only");
  }
  if (k < 2) throw std::invalid_argument("basis order k must be >= 2");
  if (max_degree < 0) throw std::invalid_argument("basis max_degree must be >= 0");
  AradialBasis basis;
  basis.dim = dim;
  basis.k = k;
  if (dim == 2) {
    auto mode = [k](int m, bool sine) {
      return fields::HomogeneousOneForm(
                 -k, 2,
                 [m, sine](const UnitVector& u) {
                   const std::complex<double> w =
                       std::pow(std::complex<double>(u[0], u[1]), m);
                   const double trig = sine ? w.imag() : w.real();
                   return Vec{-u[1] * trig, u[0] * trig};
                 })
          .checked_aradial();
    };
    basis.elements.push_back(mode(0, false));
    basis.labels.push_back("tan0");
    for (int m = 1; m <= max_degree; ++m) {
      basis.elements.push_back(mode(m, false));
      basis.labels.push_back("tan" + std::to_string(m) + "c");
      basis.elements.push_back(mode(m, true));
      basis.labels.push_back("tan" + std::to_string(m) + "s");
    }
  } else {
    if (max_degree < 1) {
      throw std::invalid_argument("the 3-dimensional basis needs max_degree >= 1");
    }
    auto push = [&basis, k](int l, int m, harmonics::Part part, bool rotated) {
      auto field = rotated ? harmonics::rotated_gradient_field(l, m, part)
                           : harmonics::surface_gradient_field(l, m, part);
      basis.elements.push_back(
          fields::HomogeneousOneForm(-k, 3, [field](const UnitVector& u) { return field(u); })
              .checked_aradial());
      basis.labels.push_back(std::string(rotated ? "rot" : "grad") + std::to_string(l) +
                             std::to_string(m) + (part == harmonics::Part::real ? "r" : "i"));
    };
    for (int l = 1; l <= max_degree; ++l) {
      for (int rotated = 0; rotated < 2; ++rotated) {
        for (int m = 0; m <= l; ++m) {
          push(l, m, harmonics::Part::real, rotated == 1);
          if (m >= 1) push(l, m, harmonics::Part::imag, rotated == 1);
        }
      }
    }
  }
  basis.gram_min_eigenvalue = detail::gram_floor(basis.elements, dim);
  if (basis.gram_min_eigenvalue <= 1e-8) {
    throw std::runtime_error("basis elements are numerically dependent, Gram floor " +
                             std::to_string(basis.gram_min_eigenvalue));
  }
  return basis;
}

// Forward operator sampled over geodesics: entries(i, j) = I_k[element j](geodesic i).
struct DesignMatrix {
  std::vector<Geodesic> geodesics;
  std::vector<std::string> labels;
  Eigen::MatrixXd entries;
};

inline DesignMatrix assemble(const AradialBasis& basis, const std::vector<Geodesic>& geodesics,
                             int panels = 64, int points_per_panel = 10) {
  if (basis.elements.empty()) throw std::invalid_argument("design matrix needs a nonempty basis");
  if (geodesics.empty()) throw std::invalid_argument("design matrix needs at least one geodesic");
  DesignMatrix M;
  M.geodesics = geodesics;
  M.labels = basis.labels;
  M.entries.resize(static_cast<Eigen::Index>(geodesics.size()),
                   static_cast<Eigen::Index>(basis.elements.size()));
  for (std::size_t i = 0; i < geodesics.size(); ++i) {
    for (std::size_t j = 0; j < basis.elements.size(); ++j) {
      try {
        M.entries(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            raytransform::weighted_transform(fields::PotentialDifference(basis.k,
                                                                         basis.elements[j]),
                                             geodesics[i], panels, points_per_panel)
                .value;
      } catch (const std::exception& e) {
        throw std::runtime_error("design entry (" + std::to_string(i) + ", " + std::to_string(j) +
                                 ") failed: " + e.what());
      }
    }
  }
  return M;
}

struct ReconstructionResult {
  std::vector<double> coefficients;
  double residual_norm;
  std::vector<double> singular_values;  // descending
  double condition;                     // largest / smallest singular value
};

// Minimizes |M c - data|^2 + ridge |c|^2 by SVD.  With ridge 0 the
// pseudo-inverse truncates directions below 1e-12 of the top singular value.
inline ReconstructionResult solve(const DesignMatrix& M, const std::vector<double>& data,
                                  double ridge = 0.0) {
  if (static_cast<Eigen::Index>(data.size()) != M.entries.rows()) {
    throw std::invalid_argument("data length must match the design matrix row count");
  }
  if (ridge < 0.0) throw std::invalid_argument("ridge must be nonnegative");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M.entries, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd sigma = svd.singularValues();
  if (sigma.maxCoeff() < 1e-13) {
    throw std::runtime_error("design matrix is numerically rank deficient: all singular values "
                             "below 1e-13");
  }
  Eigen::VectorXd y(static_cast<Eigen::Index>(data.size()));
  for (std::size_t i = 0; i < data.size(); ++i) y(static_cast<Eigen::Index>(i)) = data[i];
  const Eigen::VectorXd uty = svd.matrixU().transpose() * y;
  Eigen::VectorXd filtered(sigma.size());
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    if (ridge > 0.0) {
      filtered(i) = uty(i) * sigma(i) / (sigma(i) * sigma(i) + ridge);
    } else if (sigma(i) > 1e-12 * sigma(0)) {
      filtered(i) = uty(i) / sigma(i);
    } else {
      filtered(i) = 0.0;
    }
  }
  const Eigen::VectorXd c = svd.matrixV() * filtered;
  ReconstructionResult result;
  result.coefficients.assign(c.data(), c.data() + c.size());
  result.residual_norm = (M.entries * c - y).norm();
  result.singular_values.assign(sigma.data(), sigma.data() + sigma.size());
  result.condition = sigma(0) / sigma(sigma.size() - 1);
  return result;
}

// Well-spread geodesics: omegas over a half circle (n=2, both tangent signs;
// the reversal antisymmetry makes antipodal omegas redundant) or a golden
// spiral (n=3), with tangents equally spaced in each omega-perp.
inline std::vector<Geodesic> sample_geodesics(int dim, int omega_count, int tangents_per_omega) {
  if (dim != 2 && dim != 3) {
    throw std::invalid_argument("geodesic sampling supports dimensions 2 and 3 only");
  }
  if (omega_count < 1 || tangents_per_omega < 1) {
    throw std::invalid_argument("geodesic sampling needs positive counts");
  }
  std::vector<Geodesic> geodesics;
  geodesics.reserve(static_cast<std::size_t>(omega_count) * tangents_per_omega);
  std::vector<UnitVector> omegas;
  if (dim == 2) {
    for (int i = 0; i < omega_count; ++i) {
      const double alpha = quad::kPi * (i + 0.5) / omega_count;
      omegas.push_back(UnitVector(Vec{std::cos(alpha), std::sin(alpha)}));
    }
  } else {
    omegas = sampling::quasi_uniform_sphere(3, omega_count);
  }
  for (const auto& omega : omegas) {
    for (const auto& tangent : geom::tangent_circle(omega, tangents_per_omega)) {
      geodesics.emplace_back(omega, tangent);
    }
  }
  return geodesics;
}

struct ReconstructionReport {
  ReconstructionResult result;
  std::vector<double> data;  // synthetic transform samples, after noise
  double field_sup_error;    // worst on-sphere component gap, fit vs truth
  std::optional<double> coefficient_error;  // relative, when truth coefficients are known
};

// Forward-then-invert pipeline: synthesize I_k data for the truth field over
// the given geodesics, optionally perturb uniformly, solve, and compare the
// fitted field with the truth on a sphere sample.
inline ReconstructionReport reconstruct(const fields::PotentialDifference& B_true,
                                        const AradialBasis& basis,
                                        const std::vector<Geodesic>& geodesics, double noise,
                                        sampling::Rng& rng, double ridge = 0.0, int panels = 64,
                                        int points_per_panel = 10,
                                        const std::optional<std::vector<double>>&
                                            true_coefficients = std::nullopt) {
  if (B_true.k != basis.k) throw std::invalid_argument("truth field and basis disagree on k");
  if (B_true.lead.dim() != basis.dim) {
    throw std::invalid_argument("truth field and basis disagree on dimension");
  }
  ReconstructionReport report;
  report.data.reserve(geodesics.size());
  for (const auto& g : geodesics) {
    double value = raytransform::weighted_transform(B_true, g, panels, points_per_panel).value;
    if (noise > 0.0) value += noise * rng.uniform(-1.0, 1.0);
    report.data.push_back(value);
  }
  const DesignMatrix M = assemble(basis, geodesics, panels, points_per_panel);
  report.result = solve(M, report.data, ridge);

  std::vector<std::pair<double, fields::HomogeneousOneForm>> weighted;
  for (std::size_t j = 0; j < basis.elements.size(); ++j) {
    weighted.emplace_back(report.result.coefficients[j], basis.elements[j]);
  }
  const fields::HomogeneousOneForm fitted = fields::combine(weighted);
  double sup = 0.0;
  for (const auto& u : sampling::quasi_uniform_sphere(basis.dim, 200)) {
    sup = std::max(sup, max_abs(sub(fitted.on_sphere(u), B_true.lead.on_sphere(u))));
  }
  report.field_sup_error = sup;

  if (true_coefficients) {
    if (true_coefficients->size() != report.result.coefficients.size()) {
      throw std::invalid_argument("truth coefficient length must match the basis size");
    }
    double gap = 0.0, scale = 0.0;
    for (std::size_t j = 0; j < true_coefficients->size(); ++j) {
      const double d = report.result.coefficients[j] - (*true_coefficients)[j];
      gap += d * d;
      scale += (*true_coefficients)[j] * (*true_coefficients)[j];
    }
    report.coefficient_error =
        scale > 0.0 ? std::sqrt(gap / scale) : std::sqrt(gap);
  }
  return report;
}

}  // namespace sphray::inversion
