#pragma once

#include <complex>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "sphray/config.hpp"
#include "sphray/csv.hpp"
#include "sphray/fields.hpp"
#include "sphray/inversion.hpp"
#include "sphray/quadrature.hpp"
#include "sphray/ray_transform.hpp"
#include "sphray/sampling.hpp"
#include "sphray/sphere_geom.hpp"
#include "sphray/transport.hpp"
#include "sphray/verify.hpp"

// Config-driven entry points behind the command-line subcommands.  All four
// return a process exit code: 0 success, 1 verification failure.  Input
// problems are reported by exception: config::ConfigError and
// csv::SchemaError mean malformed input (exit 4 at the boundary), anything
// else from the computation kernels maps to exit 3.

namespace sphray::runner {

using geom::Geodesic;
using geom::UnitVector;

namespace detail {

inline fields::PotentialDifference field_from_config(const config::RunConfig& cfg,
                                                     const char* command) {
  if (!cfg.field) {
    throw config::ConfigError(std::string(command) +
                              " needs a [field] section naming the potential difference");
  }
  return fields::PotentialDifference(cfg.k,
                                     config::make_field(*cfg.field, cfg.dimension, cfg.k));
}

}  // namespace detail

// Tabulates the weighted transform of the configured field over a
// quasi-uniform grid of geodesics and writes the table as CSV.
inline int run_transform(const config::RunConfig& cfg, std::ostream& out) {
  const auto B = detail::field_from_config(cfg, "transform");
  const auto omegas = sampling::quasi_uniform_sphere(cfg.dimension, cfg.omegas);
  const auto table = raytransform::transform_grid(B, omegas, cfg.tangents, cfg.panels,
                                                  cfg.points_per_panel);
  csv::write_transform(out, cfg.dimension, table);
  return 0;
}

// Solves the transport recursion with the configured field's forcing reused
// at every level, then writes the sampled solutions with their fitted
// blow-up exponents.
inline int run_transport(const config::RunConfig& cfg, std::ostream& out) {
  const auto B = detail::field_from_config(cfg, "transport");
  const UnitVector pole = UnitVector::axis(cfg.dimension, cfg.dimension - 1);
  const transport::ForcingTerm base = transport::forcing_wk(B, cfg.lambda, pole);

  transport::CascadeConfig cascade_cfg;
  cascade_cfg.lambda = cfg.lambda;
  cascade_cfg.max_level = cfg.max_level;
  cascade_cfg.theta_grid = geom::tangent_circle(pole, cfg.tangents);

  const auto source = [&base](int level, const std::vector<transport::TransportSolution>&) {
    transport::ForcingTerm d = base;
    d.level = level;
    d.claimed_growth = -level;
    return d;
  };
  const auto solutions = transport::cascade(cascade_cfg, source);

  std::vector<csv::TransportRow> rows;
  for (int j = 1; j <= cfg.max_level; ++j) {
    const auto& a = solutions[static_cast<std::size_t>(j - 1)];
    for (std::size_t t = 0; t < cascade_cfg.theta_grid.size(); ++t) {
      const auto& theta = cascade_cfg.theta_grid[t];
      const double growth = transport::growth_check(a, theta);
      for (int i = 0; i < cfg.s_points; ++i) {
        const double s = quad::kPi * i / cfg.s_points;
        rows.push_back({s, static_cast<int>(t), j, a(s, theta), growth});
      }
    }
  }
  csv::write_transport(out, rows);
  return 0;
}

// Least-squares reconstruction of an aradial lead term from a transform
// table.  The geodesics come from the data rows; the basis is rebuilt from
// the config.  When the config also names a field, the reconstruction is
// compared against it in sup norm on the sphere.
inline int run_invert(const config::RunConfig& cfg, std::istream& data_in, std::ostream& out) {
  const csv::TransformTable table = csv::read_transform(data_in);
  if (table.dim != cfg.dimension) {
    throw csv::SchemaError("data dimension " + std::to_string(table.dim) +
                           " does not match configured dimension " +
                           std::to_string(cfg.dimension));
  }
  if (table.k != cfg.k) {
    throw csv::SchemaError("data k " + std::to_string(table.k) +
                           " does not match configured k " + std::to_string(cfg.k));
  }

  std::vector<Geodesic> geodesics;
  std::vector<double> data;
  geodesics.reserve(table.rows.size());
  data.reserve(table.rows.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    try {
      geodesics.emplace_back(UnitVector(row.omega), UnitVector(row.tangent));
    } catch (const std::exception& e) {
      throw csv::SchemaError("row " + std::to_string(i + 1) + ": " + e.what());
    }
    data.push_back(row.value);
  }

  const auto basis = inversion::build_basis(cfg.dimension, cfg.k, cfg.max_degree);
  const auto M = inversion::assemble(basis, geodesics, cfg.panels, cfg.points_per_panel);
  const auto result = inversion::solve(M, data, cfg.ridge);

  out << "dimension: " << cfg.dimension << "\n";
  out << "k: " << cfg.k << "\n";
  out << "geodesics: " << geodesics.size() << "\n";
  out << "basis_size: " << basis.elements.size() << "\n";
  out << "condition: " << csv::format_double(result.condition) << "\n";
  out << "residual_norm: " << csv::format_double(result.residual_norm) << "\n";
  out << "singular_values:";
  for (std::size_t i = 0; i < result.singular_values.size(); ++i) {
    out << (i == 0 ? " " : ",") << csv::format_double(result.singular_values[i]);
  }
  out << "\n";
  for (std::size_t i = 0; i < basis.labels.size(); ++i) {
    out << "coefficient_" << basis.labels[i] << ": "
        << csv::format_double(result.coefficients[i]) << "\n";
  }

  if (cfg.field) {
    const auto truth = detail::field_from_config(cfg, "invert");
    std::vector<std::pair<double, fields::HomogeneousOneForm>> terms;
    for (std::size_t i = 0; i < basis.elements.size(); ++i) {
      terms.emplace_back(result.coefficients[i], basis.elements[i]);
    }
    const auto fitted = fields::combine(terms);
    double sup = 0.0;
    for (const auto& u : sampling::quasi_uniform_sphere(cfg.dimension, 200)) {
      sup = std::max(sup, max_abs(sub(fitted.on_sphere(u), truth.lead.on_sphere(u))));
    }
    out << "field_sup_error: " << csv::format_double(sup) << "\n";
  }
  return 0;
}

// Runs the named-check suite and prints one line per check.  The optional
// `corrupt` config key flips one check's internal sign so the harness itself
// can be exercised; naming an unknown check is a config error.
inline int run_verify(const config::RunConfig& cfg, std::ostream& out) {
  if (!cfg.corrupt.empty() && !verify::has_check(cfg.corrupt)) {
    throw config::ConfigError("corrupt names an unknown check '" + cfg.corrupt + "'");
  }
  const auto results = verify::run_all(cfg.corrupt);
  out << verify::report(results);
  return verify::all_passed(results) ? 0 : 1;
}

}  // namespace sphray::runner
