#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "sphray/fields.hpp"
#include "sphray/sampling.hpp"
#include "sphray/transport.hpp"

using namespace sphray;
using Catch::Matchers::ContainsSubstring;
using geom::Geodesic;
using geom::UnitVector;
using Complex = std::complex<double>;

namespace {

transport::ForcingTerm profile_forcing(int level, std::function<Complex(double)> profile) {
  transport::ForcingTerm d;
  d.level = level;
  d.claimed_growth = 0;
  d.values = [profile = std::move(profile)](double s, const UnitVector&) { return profile(s); };
  return d;
}

fields::HomogeneousOneForm tangential_2d(int k, double c) {
  return fields::HomogeneousOneForm(-k, 2, [c](const UnitVector& u) {
           return Vec{-c * u[1], c * u[0]};
         })
      .checked_aradial();
}

const UnitVector kTheta2 = UnitVector::axis(2, 0);

}  // namespace

TEST_CASE("transport: level-1 forcing from potential lead terms", "[transport]") {
  const int n = 3;
  const UnitVector pole = UnitVector::axis(n, n - 1);
  const auto A_zero = fields::HomogeneousOneForm::zero(-2, n);
  const auto q_zero = fields::HomogeneousScalar::zero(-2, n);
  const auto zero = transport::forcing_w2(A_zero, q_zero, 1.5, pole);
  CHECK(zero.level == 1);
  CHECK(std::abs(zero.values(1.0, UnitVector::axis(n, 0))) == 0.0);

  // Only the omega-component of A survives: W = -lambda on the whole sphere.
  const auto A_axis = fields::HomogeneousOneForm(-2, n, [n](const UnitVector&) {
    Vec v(n, 0.0);
    v[n - 1] = 1.0;
    return v;
  });
  const double lambda = 2.5;
  const auto flat = transport::forcing_w2(A_axis, q_zero, lambda, pole);
  for (double s : {0.3, 1.4, 2.8}) {
    CHECK(std::abs(flat.values(s, UnitVector::axis(n, 0)) - Complex(-lambda, 0.0)) < 1e-14);
  }

  // n = 2, A(u) = (0, u_1), omega = e_2: W(s) = -sin(s) along the geodesic
  // with tangent e_1.
  const auto A_plane =
      fields::HomogeneousOneForm(-2, 2, [](const UnitVector& u) { return Vec{0.0, u[0]}; });
  const auto wave = transport::forcing_w2(A_plane, fields::HomogeneousScalar::zero(-2, 2), 1.0,
                                          UnitVector::axis(2, 1));
  for (double s : {0.2, 1.0, 2.0, 3.0}) {
    CHECK(std::abs(wave.values(s, kTheta2) - Complex(-std::sin(s), 0.0)) < 1e-14);
  }

  const auto A_wrong = fields::HomogeneousOneForm::zero(-3, 2);
  CHECK_THROWS_AS(transport::forcing_w2(A_wrong, fields::HomogeneousScalar::zero(-2, 2), 1.0,
                                        UnitVector::axis(2, 1)),
                  std::invalid_argument);
  CHECK_THROWS_AS(transport::forcing_w2(A_zero, q_zero, 0.0, pole), std::invalid_argument);
}

TEST_CASE("transport: difference forcing and the aradial identity", "[transport]") {
  const double c = 1.1, lambda = 1.7;
  const int k = 3;
  const fields::PotentialDifference B(k, tangential_2d(k, c));
  const UnitVector omega = UnitVector::axis(2, 1);
  const auto w = transport::forcing_wk(B, lambda, omega);
  CHECK(w.level == k - 1);

  const Geodesic g(omega, kTheta2);
  for (int t = 1; t < 30; ++t) {
    const double s = geom::kPi * t / 30.0;
    // Closed form along this geodesic: W(s) = -lambda c sin(s).
    CHECK(std::abs(w.values(s, kTheta2) - Complex(-lambda * c * std::sin(s), 0.0)) < 1e-13);
    // Aradial identity form: W(s) = lambda <B, gamma'> sin(s).
    const Vec x = geom::geodesic_point(g, s).data();
    const double via_pair =
        lambda * fields::pair(B.lead, x, geom::geodesic_velocity(g, s)) * std::sin(s);
    CHECK(std::abs(w.values(s, kTheta2) - Complex(via_pair, 0.0)) < 1e-10);
  }

  const fields::PotentialDifference zero(2, fields::HomogeneousOneForm::zero(-2, 2));
  const auto wz = transport::forcing_wk(zero, 1.0, omega);
  CHECK(std::abs(wz.values(1.0, kTheta2)) == 0.0);
  CHECK_THROWS_AS(transport::forcing_wk(B, -1.0, omega), std::invalid_argument);
}

TEST_CASE("transport: first-level closed forms", "[transport]") {
  const auto zero = transport::solve_first(profile_forcing(1, [](double) { return Complex{}; }),
                                           1.0);
  for (double s : {0.0, 1.0, 2.5}) CHECK(std::abs(zero(s, kTheta2)) == 0.0);

  const double c = 3.0;
  const auto a = transport::solve_first(
      profile_forcing(1, [c](double) { return Complex(c, 0.0); }), 1.0);
  // Constant forcing: a(s) = i c s / (2 sin s).
  for (double s : {0.4, 1.1, geom::kPi / 2.0, 2.7}) {
    const Complex expected = Complex(0.0, c * s / (2.0 * std::sin(s)));
    CHECK(std::abs(a(s, kTheta2) - expected) < 1e-12);
  }
  CHECK(std::abs(a(geom::kPi / 2.0, kTheta2) - Complex(0.0, c * geom::kPi / 4.0)) < 1e-12);
  // Finite limit i c / 2 at the pole, approached monotonically.
  const Complex limit(0.0, c / 2.0);
  CHECK(std::abs(a(0.0, kTheta2) - limit) == 0.0);
  double prev = std::abs(a(1e-2, kTheta2) - limit);
  for (double s : {1e-3, 1e-4}) {
    const double gap = std::abs(a(s, kTheta2) - limit);
    CHECK(gap < prev);
    prev = gap;
  }

  CHECK_THROWS_AS(transport::solve_first(profile_forcing(2, [](double) { return Complex{}; }),
                                         1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(transport::solve_first(profile_forcing(1, [](double) { return Complex{}; }),
                                         0.0),
                  std::invalid_argument);
}

TEST_CASE("transport: general step closed forms", "[transport]") {
  // j = 2, d = 1, lambda = 1: a(s) = i (1 - cos s) / (2 sin^2 s), value i/2 at
  // the equator, limit i/4 at the pole.
  const auto a2 = transport::solve_step(
      profile_forcing(2, [](double) { return Complex(1.0, 0.0); }), 1.0);
  for (double s : {0.5, 1.3, geom::kPi / 2.0, 2.6}) {
    const Complex expected =
        Complex(0.0, (1.0 - std::cos(s)) / (2.0 * std::sin(s) * std::sin(s)));
    CHECK(std::abs(a2(s, kTheta2) - expected) < 1e-12);
  }
  CHECK(std::abs(a2(geom::kPi / 2.0, kTheta2) - Complex(0.0, 0.5)) < 1e-12);
  CHECK(std::abs(a2(0.0, kTheta2) - Complex(0.0, 0.25)) == 0.0);

  // j = 1 goes through the same formula as solve_first.
  const auto d1 = profile_forcing(1, [](double s) { return Complex(std::sin(s), 0.3); });
  const auto first = transport::solve_first(d1, 1.4);
  const auto step = transport::solve_step(d1, 1.4);
  for (double s : {0.3, 1.7, 2.9}) {
    CHECK(std::abs(first(s, kTheta2) - step(s, kTheta2)) < 1e-15);
  }

  // Pole limit i d(0) / (2 lambda j) for several levels.
  for (int j : {1, 2, 3}) {
    const auto a = transport::solve_step(
        profile_forcing(j, [](double) { return Complex(2.0, -1.0); }), 0.7);
    const Complex expected = Complex(0.0, 1.0) * Complex(2.0, -1.0) / (2.0 * 0.7 * j);
    CHECK(std::abs(a(0.0, kTheta2) - expected) < 1e-15);
  }

  CHECK_THROWS_AS(a2(-0.1, kTheta2), std::domain_error);
  CHECK_THROWS_AS(a2(geom::kPi, kTheta2), std::domain_error);
}

TEST_CASE("transport: linearity of the solve in the forcing", "[transport]") {
  const auto d1 = profile_forcing(2, [](double s) { return Complex(std::sin(s), 0.0); });
  const auto d2 = profile_forcing(2, [](double s) { return Complex(0.2, std::cos(s)); });
  const double alpha = 1.25, beta = -0.75;
  transport::ForcingTerm mix;
  mix.level = 2;
  mix.values = [&, alpha, beta](double s, const UnitVector& theta) {
    return alpha * d1.values(s, theta) + beta * d2.values(s, theta);
  };
  const auto am = transport::solve_step(mix, 1.0);
  const auto a1 = transport::solve_step(d1, 1.0);
  const auto a2 = transport::solve_step(d2, 1.0);
  for (double s : {0.4, 1.6, 2.8}) {
    const Complex lhs = am(s, kTheta2);
    const Complex rhs = alpha * a1(s, kTheta2) + beta * a2(s, kTheta2);
    CHECK(std::abs(lhs - rhs) < 1e-12);
  }
}

TEST_CASE("transport: residual is the normative convention check", "[transport]") {
  // Smooth forcings at several levels: residual below 1e-7 across the band.
  const auto grid_band = transport::uniform_grid(0.05, geom::kPi - 0.2, 40);
  const auto grid_example = transport::uniform_grid(0.1, 3.0, 30);

  const auto d_const = profile_forcing(1, [](double) { return Complex(1.0, 0.0); });
  const auto a_const = transport::solve_first(d_const, 1.0);
  CHECK(transport::residual(a_const, d_const, 1, 1.0, grid_band, kTheta2) < 1e-7);

  const auto d_sin = profile_forcing(2, [](double s) { return Complex(std::sin(s), 0.0); });
  const auto a_sin = transport::solve_step(d_sin, 2.0);
  CHECK(transport::residual(a_sin, d_sin, 2, 2.0, grid_band, kTheta2) < 1e-7);
  CHECK(transport::residual(a_sin, d_sin, 2, 2.0, grid_example, kTheta2) < 1e-7);

  const auto d_mix =
      profile_forcing(3, [](double s) { return Complex(0.5 + 0.25 * std::cos(s), 0.2); });
  const auto a_mix = transport::solve_step(d_mix, 0.9);
  CHECK(transport::residual(a_mix, d_mix, 3, 0.9, grid_band, kTheta2) < 1e-7);

  // Zero solution against a nonzero forcing: residual = max |d|.
  const auto a_zero =
      transport::solve_step(profile_forcing(2, [](double) { return Complex{}; }), 1.0);
  const double r =
      transport::residual(a_zero, d_sin, 2, 1.0, transport::uniform_grid(0.4, 2.8, 25), kTheta2);
  double dmax = 0.0;
  for (double s : transport::uniform_grid(0.4, 2.8, 25)) {
    dmax = std::max(dmax, std::abs(std::sin(s)));
  }
  CHECK(std::abs(r - dmax) < 1e-9);

  // A solution shifted by a constant violates the ODE by 2 lambda j cos(s)
  // times the shift, up to the residual of the unshifted solution.
  const double shift = 0.01, lambda = 1.0;
  const int j = 2;
  const double h = 1e-6;
  for (double s : {0.5, 1.0, 2.5}) {
    const Complex da = (a_sin(s + h, kTheta2) - a_sin(s - h, kTheta2)) / (2.0 * h);
    const Complex shifted =
        Complex(0.0, 2.0 * lambda) *
            (std::sin(s) * da + j * std::cos(s) * (a_sin(s, kTheta2) + shift)) +
        d_sin.values(s, kTheta2);
    CHECK(std::abs(shifted) >= 0.01 * 2.0 * lambda * j * std::abs(std::cos(s)) - 1e-5);
  }

  // The pole-adjacent stencil is rejected rather than silently clipped.
  CHECK_THROWS_AS(transport::residual(a_sin, d_sin, 2, 1.0, {1e-9}, kTheta2),
                  std::domain_error);
}

TEST_CASE("transport: growth exponents match the level", "[transport]") {
  for (int j : {1, 2, 3}) {
    const auto a = transport::solve_step(
        profile_forcing(j, [](double) { return Complex(1.0, 0.0); }), 1.0);
    const double fit = transport::growth_check(a, kTheta2);
    CAPTURE(j);
    CHECK(std::abs(fit - static_cast<double>(-j)) < (j < 3 ? 0.05 : 0.1));
    CHECK(a.growth() == -j);
  }

  // Cancelling forcing d = cos: the weighted integral over [0, pi] vanishes,
  // so the blow-up is strictly weaker than (pi-s)^{-j}; here the solution is
  // exactly constant for j = 1 and j = 2.
  for (int j : {1, 2}) {
    const auto a = transport::solve_step(
        profile_forcing(j, [](double s) { return Complex(std::cos(s), 0.0); }), 1.0);
    const double fit = transport::growth_check(a, kTheta2);
    CHECK(fit > -0.2);  // far above -j
    // j = 1: a = i/2; j = 2: a = i/4 (both exactly constant).
    const Complex constant = (j == 1) ? Complex(0.0, 0.5) : Complex(0.0, 0.25);
    for (double s : {0.5, 1.5, 2.9}) CHECK(std::abs(a(s, kTheta2) - constant) < 1e-11);
  }
}

TEST_CASE("transport: cascade runs the gate at every level", "[transport]") {
  transport::CascadeConfig cfg;
  cfg.lambda = 1.0;
  cfg.max_level = 3;
  cfg.theta_grid = {kTheta2};

  // Same smooth forcing at each level: all residuals pass, growths match.
  const auto source = [](int level, const std::vector<transport::TransportSolution>& lower) {
    CHECK(static_cast<int>(lower.size()) == level - 1);
    return profile_forcing(level, [](double s) { return Complex(1.0 + 0.25 * std::sin(s), 0.0); });
  };
  const auto solutions = transport::cascade(cfg, source);
  REQUIRE(solutions.size() == 3);
  for (int j = 1; j <= 3; ++j) {
    const double fit = transport::growth_check(solutions[j - 1], kTheta2);
    CHECK(std::abs(fit - static_cast<double>(-j)) < 0.1);
  }

  // Single level reproduces solve_first pointwise.
  transport::CascadeConfig single = cfg;
  single.max_level = 1;
  const auto one = transport::cascade(single, source);
  const auto direct = transport::solve_first(source(1, {}), 1.0);
  for (double s : {0.3, 1.2, 2.2}) {
    CHECK(std::abs(one.front()(s, kTheta2) - direct(s, kTheta2)) < 1e-15);
  }

  // All-zero forcings give all-zero solutions.
  const auto zero_source = [](int level, const std::vector<transport::TransportSolution>&) {
    return profile_forcing(level, [](double) { return Complex{}; });
  };
  const auto zeros = transport::cascade(cfg, zero_source);
  for (const auto& a : zeros) {
    for (double s : {0.0, 1.0, 3.0}) CHECK(std::abs(a(s, kTheta2)) == 0.0);
  }

  // An unattainable tolerance aborts with the offending level named.
  transport::CascadeConfig strict = cfg;
  strict.residual_tol = 1e-30;
  CHECK_THROWS_WITH(transport::cascade(strict, source), ContainsSubstring("level 1"));

  // A source that mislabels its level is rejected.
  const auto bad_level = [](int, const std::vector<transport::TransportSolution>&) {
    return profile_forcing(1, [](double) { return Complex(1.0, 0.0); });
  };
  transport::CascadeConfig two = cfg;
  two.max_level = 2;
  CHECK_THROWS_AS(transport::cascade(two, bad_level), std::invalid_argument);

  transport::CascadeConfig empty = cfg;
  empty.theta_grid.clear();
  CHECK_THROWS_AS(transport::cascade(empty, source), std::invalid_argument);
}

TEST_CASE("transport: solve options validate their grid", "[transport]") {
  CHECK_THROWS_AS(transport::uniform_grid(0.0, 1.0, 1), std::invalid_argument);
  transport::SolveOptions bad;
  bad.s_grid = transport::uniform_grid(0.1, geom::kPi, 64);
  CHECK_THROWS_AS(transport::solve_step(
                      profile_forcing(1, [](double) { return Complex(1.0, 0.0); }), 1.0, bad),
                  std::invalid_argument);
}
