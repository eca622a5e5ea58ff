#pragma once

#include <cctype>
#include <cstdlib>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "sphray/fields.hpp"
#include "sphray/harmonics.hpp"
#include "sphray/vec.hpp"

// Line-oriented run configuration: `key = value` under [run], [field],
// [grid], [inversion] headers, comments from '#'.  Parsing is strict; every
// error carries a line number.

namespace sphray::config {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct FieldSpec {
  std::string type;                     // radial | tangential2d | harmonic3d | custom
  double f = 1.0;                       // radial scale
  double c = 1.0;                       // tangential2d scale
  int l = 1;                            // harmonic3d degree
  int m = 0;                            // harmonic3d order; m < 0 selects the sine branch
  std::string variant = "grad";         // harmonic3d family: grad | rot
  std::map<int, std::string> components;  // custom: 1-based coordinate -> polynomial in u1..un
};

struct RunConfig {
  int dimension = 0;
  int k = 0;
  double lambda = 1.0;
  std::string corrupt;  // verify maintenance hook: name of a check to sign-flip
  std::optional<FieldSpec> field;
  int panels = 64;
  int points_per_panel = 10;
  int omegas = 16;
  int tangents = 2;
  int s_points = 64;
  int max_level = 3;
  int max_degree = 2;
  double ridge = 0.0;
};

namespace detail {

[[noreturn]] inline void fail(int line, const std::string& what) {
  throw ConfigError("line " + std::to_string(line) + ": " + what);
}

inline std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

inline double parse_double(const std::string& value, int line) {
  const std::string t = trim(value);
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size()) fail(line, "malformed number '" + t + "'");
  return v;
}

inline int parse_int(const std::string& value, int line) {
  const double v = parse_double(value, line);
  const int i = static_cast<int>(v);
  if (static_cast<double>(i) != v) fail(line, "expected an integer, got '" + trim(value) + "'");
  return i;
}

// Recursive-descent parser for polynomial expressions in u1..u<dim> with
// + - * ^ and parentheses; exponents are nonnegative integers.
class PolynomialParser {
 public:
  using Fn = std::function<double(const Vec&)>;

  PolynomialParser(std::string text, int dim) : text_(std::move(text)), dim_(dim) {}

  Fn parse() {
    Fn e = expression();
    skip();
    if (pos_ != text_.size()) fail_at("unexpected trailing characters");
    return e;
  }

 private:
  Fn expression() {
    Fn left = term();
    for (;;) {
      skip();
      if (match('+')) {
        Fn right = term();
        left = [left, right](const Vec& u) { return left(u) + right(u); };
      } else if (match('-')) {
        Fn right = term();
        left = [left, right](const Vec& u) { return left(u) - right(u); };
      } else {
        return left;
      }
    }
  }

  Fn term() {
    Fn left = factor();
    for (;;) {
      skip();
      if (match('*')) {
        Fn right = factor();
        left = [left, right](const Vec& u) { return left(u) * right(u); };
      } else {
        return left;
      }
    }
  }

  Fn factor() {
    Fn base_fn = base();
    skip();
    if (match('^')) {
      skip();
      std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (start == pos_) fail_at("exponent must be a nonnegative integer");
      const int p = std::stoi(text_.substr(start, pos_ - start));
      return [base_fn, p](const Vec& u) {
        double v = 1.0, b = base_fn(u);
        for (int i = 0; i < p; ++i) v *= b;
        return v;
      };
    }
    return base_fn;
  }

  Fn base() {
    skip();
    if (match('-')) {
      Fn inner = factor();
      return [inner](const Vec& u) { return -inner(u); };
    }
    if (match('(')) {
      Fn inner = expression();
      skip();
      if (!match(')')) fail_at("expected ')'");
      return inner;
    }
    if (pos_ < text_.size() && text_[pos_] == 'u') {
      ++pos_;
      if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        fail_at("coordinate must be u1..u" + std::to_string(dim_));
      }
      const int index = text_[pos_] - '0';
      ++pos_;
      if (index < 1 || index > dim_) {
        fail_at("coordinate u" + std::to_string(index) + " out of range for dimension " +
                std::to_string(dim_));
      }
      return [index](const Vec& u) { return u[index - 1]; };
    }
    const char* start = text_.c_str() + pos_;
    char* end = nullptr;
    const double v = std::strtod(start, &end);
    if (end == start) fail_at("expected a number, coordinate, or '('");
    pos_ += static_cast<std::size_t>(end - start);
    return [v](const Vec&) { return v; };
  }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool match(char c) {
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail_at(const std::string& what) {
    throw ConfigError("polynomial '" + text_ + "' position " + std::to_string(pos_) + ": " + what);
  }

  std::string text_;
  int dim_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::map<std::string, int> seen;  // fully qualified key -> first line
  std::string section;
  bool field_section_seen = false;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  FieldSpec field;

  while (std::getline(in, raw)) {
    ++line;
    const std::size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string s = detail::trim(raw);
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') detail::fail(line, "unterminated section header");
      section = s.substr(1, s.size() - 2);
      if (section != "run" && section != "field" && section != "grid" &&
          section != "inversion") {
        detail::fail(line, "unknown section [" + section + "]");
      }
      if (section == "field") field_section_seen = true;
      continue;
    }
    const std::size_t eq = s.find('=');
    if (eq == std::string::npos) detail::fail(line, "expected 'key = value'");
    const std::string key = detail::trim(s.substr(0, eq));
    const std::string value = detail::trim(s.substr(eq + 1));
    if (key.empty()) detail::fail(line, "empty key");
    if (value.empty()) detail::fail(line, "empty value for key '" + key + "'");
    if (section.empty()) detail::fail(line, "key '" + key + "' appears before any section");

    const std::string qualified = section + "." + key;
    const auto [it, inserted] = seen.emplace(qualified, line);
    if (!inserted) {
      detail::fail(line, "duplicate key '" + key + "' in section [" + section +
                             "], first set at line " + std::to_string(it->second));
    }

    if (section == "run") {
      if (key == "dimension") {
        cfg.dimension = detail::parse_int(value, line);
        if (cfg.dimension < 2) detail::fail(line, "dimension must be >= 2");
      } else if (key == "k") {
        cfg.k = detail::parse_int(value, line);
        if (cfg.k < 2) {
          detail::fail(line, "k must be >= 2: the difference of potentials has lead order -k "
                             "with k >= 2");
        }
      } else if (key == "lambda") {
        cfg.lambda = detail::parse_double(value, line);
        if (!(cfg.lambda > 0.0)) detail::fail(line, "lambda must be positive");
      } else if (key == "corrupt") {
        cfg.corrupt = value;
      } else {
        detail::fail(line, "unknown key '" + key + "' in section [run]");
      }
    } else if (section == "field") {
      if (key == "type") {
        if (value != "radial" && value != "tangential2d" && value != "harmonic3d" &&
            value != "custom") {
          detail::fail(line, "unknown field type '" + value + "'");
        }
        field.type = value;
      } else if (key == "f") {
        field.f = detail::parse_double(value, line);
      } else if (key == "c") {
        field.c = detail::parse_double(value, line);
      } else if (key == "l") {
        field.l = detail::parse_int(value, line);
      } else if (key == "m") {
        field.m = detail::parse_int(value, line);
      } else if (key == "variant") {
        if (value != "grad" && value != "rot") {
          detail::fail(line, "variant must be 'grad' or 'rot'");
        }
        field.variant = value;
      } else if (key.rfind("component_", 0) == 0) {
        const std::string tail = key.substr(10);
        if (tail.size() != 1 || !std::isdigit(static_cast<unsigned char>(tail[0])) ||
            tail[0] == '0') {
          detail::fail(line, "component keys are component_1..component_9");
        }
        field.components[tail[0] - '0'] = value;
      } else {
        detail::fail(line, "unknown key '" + key + "' in section [field]");
      }
    } else if (section == "grid") {
      int* target = nullptr;
      if (key == "panels") target = &cfg.panels;
      else if (key == "pts") target = &cfg.points_per_panel;
      else if (key == "omegas") target = &cfg.omegas;
      else if (key == "tangents") target = &cfg.tangents;
      else if (key == "s_points") target = &cfg.s_points;
      else if (key == "max_level") target = &cfg.max_level;
      else detail::fail(line, "unknown key '" + key + "' in section [grid]");
      *target = detail::parse_int(value, line);
      if (*target < 1) detail::fail(line, "'" + key + "' must be >= 1");
    } else {  // inversion
      if (key == "max_degree") {
        cfg.max_degree = detail::parse_int(value, line);
        if (cfg.max_degree < 0) detail::fail(line, "max_degree must be >= 0");
      } else if (key == "ridge") {
        cfg.ridge = detail::parse_double(value, line);
        if (cfg.ridge < 0.0) detail::fail(line, "ridge must be nonnegative");
      } else {
        detail::fail(line, "unknown key '" + key + "' in section [inversion]");
      }
    }
  }

  if (cfg.dimension == 0) throw ConfigError("missing required key 'dimension' in section [run]");
  if (cfg.k == 0) throw ConfigError("missing required key 'k' in section [run]");

  if (field_section_seen) {
    if (field.type.empty()) throw ConfigError("section [field] needs a 'type' key");
    if (field.type == "custom") {
      for (int i = 1; i <= cfg.dimension; ++i) {
        if (!field.components.count(i)) {
          throw ConfigError("custom field is missing component_" + std::to_string(i));
        }
        // Compile now so expression errors surface at parse time.
        detail::PolynomialParser(field.components.at(i), cfg.dimension).parse();
      }
      for (const auto& [index, expr] : field.components) {
        if (index > cfg.dimension) {
          throw ConfigError("component_" + std::to_string(index) +
                            " exceeds dimension " + std::to_string(cfg.dimension));
        }
      }
    }
    cfg.field = field;
  }
  return cfg;
}

// Field registry: realize a named field spec as a homogeneous one-form of
// degree -k in the configured dimension.
inline fields::HomogeneousOneForm make_field(const FieldSpec& spec, int dimension, int k) {
  using geom::UnitVector;
  if (spec.type == "radial") {
    const double f = spec.f;
    return fields::HomogeneousOneForm(-k, dimension, [f, dimension](const UnitVector& u) {
      Vec v(dimension);
      for (int i = 0; i < dimension; ++i) v[i] = f * u[i];
      return v;
    });
  }
  if (spec.type == "tangential2d") {
    if (dimension != 2) throw ConfigError("tangential2d requires dimension = 2");
    const double c = spec.c;
    return fields::HomogeneousOneForm(-k, 2, [c](const UnitVector& u) {
             return Vec{-c * u[1], c * u[0]};
           })
        .checked_aradial();
  }
  if (spec.type == "harmonic3d") {
    if (dimension != 3) throw ConfigError("harmonic3d requires dimension = 3");
    if (spec.l < 1) throw ConfigError("harmonic3d needs l >= 1");
    if (std::abs(spec.m) > spec.l) throw ConfigError("harmonic3d needs |m| <= l");
    const auto part = spec.m < 0 ? harmonics::Part::imag : harmonics::Part::real;
    const int m = std::abs(spec.m);
    if (part == harmonics::Part::imag && m == 0) {
      throw ConfigError("harmonic3d sine branch needs m <= -1");
    }
    auto base = spec.variant == "grad" ? harmonics::surface_gradient_field(spec.l, m, part)
                                       : harmonics::rotated_gradient_field(spec.l, m, part);
    return fields::HomogeneousOneForm(-k, 3, [base](const UnitVector& u) { return base(u); })
        .checked_aradial();
  }
  if (spec.type == "custom") {
    std::vector<detail::PolynomialParser::Fn> comps;
    for (int i = 1; i <= dimension; ++i) {
      comps.push_back(detail::PolynomialParser(spec.components.at(i), dimension).parse());
    }
    return fields::HomogeneousOneForm(-k, dimension, [comps, dimension](const UnitVector& u) {
      Vec v(dimension);
      for (int i = 0; i < dimension; ++i) v[i] = comps[i](u.data());
      return v;
    });
  }
  throw ConfigError("unknown field type '" + spec.type + "'");
}

}  // namespace sphray::config
