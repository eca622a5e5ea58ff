#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "sphray/fields.hpp"
#include "sphray/sampling.hpp"
#include "sphray/sphere_geom.hpp"

using namespace sphray;
using geom::Geodesic;
using geom::UnitVector;

namespace {

fields::HomogeneousOneForm tangential_2d(int k, double c) {
  return fields::HomogeneousOneForm(-k, 2, [c](const UnitVector& u) {
           return Vec{-c * u[1], c * u[0]};
         })
      .checked_aradial();
}

fields::HomogeneousOneForm constant_covector(int k, int dim, int component) {
  return fields::HomogeneousOneForm(-k, dim, [dim, component](const UnitVector&) {
    Vec v(dim, 0.0);
    v[component] = 1.0;
    return v;
  });
}

}  // namespace

TEST_CASE("fields: construction validates degree and dimension", "[fields]") {
  const auto eval = [](const UnitVector& u) { return u.data(); };
  CHECK_THROWS_AS(fields::HomogeneousOneForm(0, 2, eval), std::invalid_argument);
  CHECK_THROWS_AS(fields::HomogeneousOneForm(2, 2, eval), std::invalid_argument);
  CHECK_THROWS_AS(fields::HomogeneousOneForm(-2, 1, eval), std::invalid_argument);
  CHECK_THROWS_AS(fields::HomogeneousScalar(-2, 2, nullptr), std::invalid_argument);
  CHECK(fields::HomogeneousOneForm::zero(-2, 3).is_aradial());
}

TEST_CASE("fields: homogeneous extension scales", "[fields]") {
  const auto B = constant_covector(2, 3, 0);
  const Vec at_2e1 = fields::evaluate_oneform(B, Vec{2.0, 0.0, 0.0});
  CHECK(std::abs(at_2e1[0] - 0.25) < 1e-15);
  CHECK(at_2e1[1] == 0.0);

  const auto tang = tangential_2d(2, 0.5);
  const Vec at_e2 = fields::evaluate_oneform(tang, Vec{0.0, 1.0});
  CHECK(std::abs(at_e2[0] + 0.5) < 1e-15);
  CHECK(std::abs(at_e2[1]) < 1e-15);

  CHECK_THROWS_AS(fields::evaluate_oneform(B, Vec{0.0, 0.0, 0.0}), std::domain_error);

  sampling::Rng rng(21);
  for (int i = 0; i < 50; ++i) {
    const int dim = i % 2 == 0 ? 2 : 3;
    const int k = 2 + i % 3;
    const auto F = fields::HomogeneousOneForm(-k, dim, [dim](const UnitVector& u) {
      Vec v(dim);
      for (int c = 0; c < dim; ++c) v[c] = std::sin(u[c] + c);
      return v;
    });
    const double t = rng.uniform(0.1, 10.0);
    const Vec x = scaled(rng.sphere_point(dim).data(), rng.uniform(0.5, 2.0));
    const Vec lhs = fields::evaluate_oneform(F, scaled(x, t));
    const Vec rhs = scaled(fields::evaluate_oneform(F, x), std::pow(t, -k));
    CHECK(max_abs(sub(lhs, rhs)) <= 1e-10 * std::max(1.0, max_abs(rhs)));
  }

  const auto q = fields::HomogeneousScalar(-3, 2, [](const UnitVector& u) { return u[0]; });
  CHECK(std::abs(fields::evaluate_scalar(q, Vec{2.0, 0.0}) - 0.125) < 1e-15);
  CHECK_THROWS_AS(fields::evaluate_scalar(q, Vec{0.0, 0.0}), std::domain_error);
}

TEST_CASE("fields: aradial projection removes the radial part", "[fields]") {
  // Purely radial input projects to zero.
  const auto radial = fields::HomogeneousOneForm(-2, 3, [](const UnitVector& u) {
    return scaled(u.data(), 1.0 + u[0] * u[0]);
  });
  const auto killed = fields::aradial_project(radial);
  for (const auto& u : sampling::quasi_uniform_sphere(3, 50)) {
    CHECK(max_abs(killed.on_sphere(u)) < 1e-12);
  }

  // Already-aradial input is unchanged; projection is idempotent.
  const auto tang = tangential_2d(2, 1.3);
  const auto projected = fields::aradial_project(tang);
  const auto twice = fields::aradial_project(projected);
  for (const auto& u : sampling::quasi_uniform_sphere(2, 50)) {
    CHECK(max_abs(sub(projected.on_sphere(u), tang.on_sphere(u))) < 1e-12);
    CHECK(max_abs(sub(twice.on_sphere(u), projected.on_sphere(u))) < 1e-12);
  }

  // Constant covector e_1 on the circle: components (sin^2, -sin cos).
  const auto constant = constant_covector(2, 2, 0);
  const auto proj = fields::aradial_project(constant);
  for (double phi : {0.3, 1.1, 2.0, 4.4}) {
    const UnitVector u(Vec{std::cos(phi), std::sin(phi)});
    const Vec v = proj.on_sphere(u);
    CHECK(std::abs(v[0] - std::sin(phi) * std::sin(phi)) < 1e-14);
    CHECK(std::abs(v[1] + std::sin(phi) * std::cos(phi)) < 1e-14);
  }

  // Output pairs to zero with the radial direction everywhere.
  CHECK(proj.is_aradial());
  for (const auto& u : sampling::quasi_uniform_sphere(2, 100)) {
    CHECK(std::abs(dot(proj.on_sphere(u), u.data())) < 1e-12);
  }

  // checked_aradial rejects fields with a radial component.
  CHECK_THROWS_AS(constant.checked_aradial(), std::domain_error);
}

TEST_CASE("fields: pairing closed forms and bilinearity", "[fields]") {
  const double c = 2.25;
  const auto tang = tangential_2d(2, c);
  const Geodesic g(UnitVector::axis(2, 1), UnitVector::axis(2, 0));
  for (double s : {0.2, 1.0, 1.9, 2.9}) {
    const Vec x = geom::geodesic_point(g, s).data();
    CHECK(std::abs(fields::pair(tang, x, geom::geodesic_velocity(g, s)) + c) < 1e-12);
    CHECK(std::abs(fields::pair(tang, x, x)) < 1e-12);  // aradial against radial
  }
  const auto zero = fields::HomogeneousOneForm::zero(-2, 2);
  CHECK(fields::pair(zero, Vec{0.0, 1.0}, Vec{1.0, 1.0}) == 0.0);

  sampling::Rng rng(22);
  const auto B1 = tangential_2d(2, 1.0);
  const auto B2 = fields::aradial_project(constant_covector(2, 2, 0));
  const double alpha = 0.7, beta = -1.9;
  const auto mix = fields::combine({{alpha, B1}, {beta, B2}});
  for (int i = 0; i < 20; ++i) {
    const Vec x = scaled(rng.sphere_point(2).data(), rng.uniform(0.5, 2.0));
    const Vec w = rng.sphere_point(2).data();
    const double lhs = fields::pair(mix, x, w);
    const double rhs = alpha * fields::pair(B1, x, w) + beta * fields::pair(B2, x, w);
    CHECK(std::abs(lhs - rhs) < 1e-12);
  }
  CHECK_THROWS_AS(fields::combine({{1.0, B1}, {1.0, tangential_2d(3, 1.0)}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(fields::combine({}), std::invalid_argument);
}

TEST_CASE("fields: aradial reduction identity along geodesics", "[fields]") {
  // For aradial B and the geodesic from omega = e_n with tangent e_1:
  // -<B(gamma), gamma'> sin(s) equals the n-th component of B at gamma(s).
  for (int dim : {2, 3}) {
    const UnitVector omega = UnitVector::axis(dim, dim - 1);
    const UnitVector v = UnitVector::axis(dim, 0);
    const Geodesic g(omega, v);
    const auto B =
        dim == 2 ? tangential_2d(2, 1.4)
                 : fields::aradial_project(constant_covector(2, 3, 1)).checked_aradial();
    for (int t = 1; t < 200; ++t) {
      const double s = geom::kPi * t / 200.0;
      const Vec x = geom::geodesic_point(g, s).data();
      const double lhs = -fields::pair(B, x, geom::geodesic_velocity(g, s)) * std::sin(s);
      const double rhs = fields::evaluate_oneform(B, x)[dim - 1];
      CHECK(std::abs(lhs - rhs) < 1e-10);
    }
  }
}

TEST_CASE("fields: classical symbols enforce the degree ladder", "[fields]") {
  const auto z2 = fields::HomogeneousOneForm::zero(-2, 2);
  const auto z3 = fields::HomogeneousOneForm::zero(-3, 2);
  const auto z4 = fields::HomogeneousOneForm::zero(-4, 2);
  CHECK_NOTHROW(fields::OneFormSymbol(-2, {z2, z3, z4}));
  CHECK_THROWS_AS(fields::OneFormSymbol(-2, {z3}), std::invalid_argument);
  CHECK_THROWS_AS(fields::OneFormSymbol(-2, {z2, z4}), std::invalid_argument);
  CHECK_THROWS_AS(fields::OneFormSymbol(-2, std::vector<fields::HomogeneousOneForm>{}),
                  std::invalid_argument);
}

TEST_CASE("fields: potential difference lead detection", "[fields]") {
  const auto z2 = fields::HomogeneousOneForm::zero(-2, 2);
  const auto z3 = fields::HomogeneousOneForm::zero(-3, 2);
  const auto z4 = fields::HomogeneousOneForm::zero(-4, 2);
  const auto z5 = fields::HomogeneousOneForm::zero(-5, 2);

  const fields::OneFormSymbol A(-2, {z2, z3, z4, z5});
  CHECK_FALSE(fields::difference_lead(A, A).has_value());

  const fields::OneFormSymbol with3(-2, {z2, tangential_2d(3, 0.8), z4, z5});
  const auto lead3 = fields::difference_lead(with3, A);
  REQUIRE(lead3.has_value());
  CHECK(lead3->k == 3);
  const UnitVector u(Vec{0.0, 1.0});
  CHECK(std::abs(lead3->lead.on_sphere(u)[0] + 0.8) < 1e-15);

  const fields::OneFormSymbol with5(-2, {z2, z3, z4, tangential_2d(5, 1.0)});
  const auto lead5 = fields::difference_lead(with5, A);
  REQUIRE(lead5.has_value());
  CHECK(lead5->k == 5);

  const fields::OneFormSymbol shallow(-2, {z2, z3});
  CHECK_THROWS_AS(fields::difference_lead(A, shallow), std::invalid_argument);
  const fields::OneFormSymbol order1(-1,
                                     {fields::HomogeneousOneForm::zero(-1, 2), z2, z3, z4});
  CHECK_THROWS_AS(fields::difference_lead(order1, order1), std::invalid_argument);

  CHECK_THROWS_AS(fields::PotentialDifference(1, fields::HomogeneousOneForm::zero(-1, 2)),
                  std::invalid_argument);
  CHECK_THROWS_AS(fields::PotentialDifference(3, z2), std::invalid_argument);
}
