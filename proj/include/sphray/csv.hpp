#pragma once

#include <cmath>
#include <complex>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "sphray/ray_transform.hpp"
#include "sphray/vec.hpp"

// CSV serialization for transform tables and transport traces.  One header
// line per file, numeric cells at full round-trip precision; complex values
// split into re and im columns.

namespace sphray::csv {

struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// 17 significant digits: enough for exact double round trips.
inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_transform(std::ostream& out, int dim,
                            const std::vector<raytransform::RayTransformSample>& table) {
  for (int i = 1; i <= dim; ++i) out << "omega_" << i << ",";
  for (int i = 1; i <= dim; ++i) out << "tangent_" << i << ",";
  out << "k,value\n";
  for (const auto& sample : table) {
    for (int i = 0; i < dim; ++i) out << format_double(sample.geodesic.omega[i]) << ",";
    for (int i = 0; i < dim; ++i) out << format_double(sample.geodesic.tangent[i]) << ",";
    out << sample.k << "," << format_double(sample.value) << "\n";
  }
}

struct TransformRow {
  Vec omega;
  Vec tangent;
  int k;
  double value;
};

struct TransformTable {
  int dim;
  int k;
  std::vector<TransformRow> rows;
};

namespace detail {

inline std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.push_back("");
  return cells;
}

inline double parse_cell(const std::string& cell, std::size_t row, std::size_t col) {
  char* end = nullptr;
  const double v = std::strtod(cell.c_str(), &end);
  if (cell.empty() || end != cell.c_str() + cell.size() || !std::isfinite(v)) {
    throw SchemaError("row " + std::to_string(row) + ", column " + std::to_string(col + 1) +
                      ": malformed numeric cell '" + cell + "'");
  }
  return v;
}

}  // namespace detail

// Reads a table in the write_transform schema; the dimension is inferred
// from the header.  Empty tables and mixed k values are schema errors.
inline TransformTable read_transform(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw SchemaError("missing header line");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = detail::split(line);
  if (header.size() < 6 || header.size() % 2 != 0) {
    throw SchemaError("header must be omega_1..omega_n, tangent_1..tangent_n, k, value");
  }
  const int dim = static_cast<int>((header.size() - 2) / 2);
  for (int i = 0; i < dim; ++i) {
    if (header[i] != "omega_" + std::to_string(i + 1) ||
        header[dim + i] != "tangent_" + std::to_string(i + 1)) {
      throw SchemaError("header must be omega_1..omega_n, tangent_1..tangent_n, k, value");
    }
  }
  if (header[2 * dim] != "k" || header[2 * dim + 1] != "value") {
    throw SchemaError("header must end with k, value");
  }

  TransformTable table;
  table.dim = dim;
  table.k = 0;
  std::size_t row_index = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    ++row_index;
    const auto cells = detail::split(line);
    if (cells.size() != header.size()) {
      throw SchemaError("row " + std::to_string(row_index) + ": expected " +
                        std::to_string(header.size()) + " cells, got " +
                        std::to_string(cells.size()));
    }
    TransformRow row;
    row.omega.resize(dim);
    row.tangent.resize(dim);
    for (int i = 0; i < dim; ++i) {
      row.omega[i] = detail::parse_cell(cells[i], row_index, i);
      row.tangent[i] = detail::parse_cell(cells[dim + i], row_index, dim + i);
    }
    const double k_cell = detail::parse_cell(cells[2 * dim], row_index, 2 * dim);
    row.k = static_cast<int>(k_cell);
    if (static_cast<double>(row.k) != k_cell || row.k < 2) {
      throw SchemaError("row " + std::to_string(row_index) + ": k must be an integer >= 2");
    }
    if (table.k == 0) {
      table.k = row.k;
    } else if (table.k != row.k) {
      throw SchemaError("row " + std::to_string(row_index) + ": k changed from " +
                        std::to_string(table.k) + " to " + std::to_string(row.k));
    }
    row.value = detail::parse_cell(cells[2 * dim + 1], row_index, 2 * dim + 1);
    table.rows.push_back(std::move(row));
  }
  if (table.rows.empty()) throw SchemaError("data file has no rows");
  return table;
}

struct TransportRow {
  double s;
  int theta_index;
  int level;
  std::complex<double> value;
  double growth_exponent;
};

inline void write_transport(std::ostream& out, const std::vector<TransportRow>& rows) {
  out << "s,theta_index,level,re,im,growth_exponent\n";
  for (const auto& row : rows) {
    out << format_double(row.s) << "," << row.theta_index << "," << row.level << ","
        << format_double(row.value.real()) << "," << format_double(row.value.imag()) << ","
        << format_double(row.growth_exponent) << "\n";
  }
}

}  // namespace sphray::csv
