#include "doctest.h"

#include "octwalk/error.hpp"
#include "octwalk/liouville.hpp"

#include <cmath>
#include <random>
#include <vector>

using namespace octwalk;

namespace {

std::vector<double> radii(double lo, double hi, double step) {
  std::vector<double> out;
  const int n = static_cast<int>(std::lround((hi - lo) / step));
  for (int k = 0; k <= n; ++k) {
    out.push_back(lo + k * step);
  }
  return out;
}

} // namespace

TEST_CASE("unit constants give the disk conformal factor") {
  const PotentialParams unit;
  for (double r : radii(0.05, 0.95, 0.01)) {
    const double expect = 4.0 / std::pow(1.0 - r * r, 2);
    CHECK(std::abs(potential(unit, r) - expect) <= 1e-12 * expect);
    CHECK(poincare_factor(r) == doctest::Approx(expect).epsilon(1e-15));
  }
  CHECK(potential(unit, 0.5) == doctest::Approx(64.0 / 9.0).epsilon(1e-15));
}

TEST_CASE("potential domain") {
  CHECK_THROWS_AS(potential({}, 1.0), SingularRadius);
  CHECK_THROWS_AS(potential({}, 0.0), Error);
  CHECK_THROWS_AS(potential({}, -0.5), Error);
  CHECK_THROWS_AS(potential({0.0, 1.0}, 0.5), Error);
  CHECK(singular_radius({2.0, 0.3}) == doctest::Approx(std::exp(-0.15)));

  std::mt19937_64 rng(51);
  std::uniform_real_distribution<double> amp(0.3, 3.0);
  std::uniform_real_distribution<double> off(-1.0, 1.0);
  std::uniform_real_distribution<double> rad(0.05, 3.0);
  for (int k = 0; k < 500; ++k) {
    const PotentialParams p{amp(rng), off(rng)};
    const double r = rad(rng);
    if (std::abs(r - singular_radius(p)) < 1e-3) {
      continue;
    }
    const double u = potential(p, r);
    CHECK(u > 0.0);
    CHECK(std::isfinite(u));
  }
}

TEST_CASE("liouville residual") {
  const auto grid = radii(0.1, 0.9, 0.01);
  CHECK(liouville_residual({}, grid) <= 1e-6);

  const PotentialParams shifted{2.0, 0.3};
  std::vector<double> off_singular;
  for (double r : grid) {
    if (std::abs(r - singular_radius(shifted)) > 0.05) {
      off_singular.push_back(r);
    }
  }
  CHECK(liouville_residual(shifted, off_singular) <= 1e-6);

  const PotentialParams unit;
  const double scaled = ode_residual(
      [&](long double r) { return 1.01L * potential(unit, static_cast<double>(r)); }, grid);
  CHECK(scaled > 1e-3);
}

TEST_CASE("rescaled potential metric is the disk metric") {
  const PotentialParams p{2.0, 0.5};
  // r below exp(-C/A) keeps rho = e^C r^A inside the unit disk.
  const double edge = singular_radius(p);
  std::mt19937_64 rng(52);
  std::uniform_real_distribution<double> frac(0.05, 0.95);
  std::uniform_real_distribution<double> dir(-1.0, 1.0);
  for (int k = 0; k < 200; ++k) {
    const double r = edge * frac(rng);
    const double dr = dir(rng);
    const double dphi = dir(rng);
    const double lhs = potential_line_element(p, r, dr, dphi);
    const double rhs = poincare_pullback_line_element(p, r, dr, dphi);
    CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, lhs));
  }
}

TEST_CASE("euclidean time along a geodesic") {
  for (double radius : {0.3, 1.0, 2.5}) {
    const GeodesicArc arc(radius, 0.7);
    CHECK(euclidean_time(arc, 0.0) == 0.0);
    double previous = euclidean_time(arc, -6.0);
    for (double s = -6.0; s <= 6.0; s += 0.05) {
      CHECK(euclidean_time(arc, -s) == doctest::Approx(-euclidean_time(arc, s)).epsilon(1e-13));
      if (s > -6.0) {
        const double t = euclidean_time(arc, s);
        CHECK(t > previous);
        previous = t;
      }
    }
    CHECK(std::isfinite(euclidean_time(arc, 800.0)));

    // dt/ds against (1/2)(1 - |z|^2)|dz/ds| along the arc.
    const double h = 1e-5;
    for (double s = -3.0; s <= 3.0; s += 0.25) {
      const double dt = (euclidean_time(arc, s + h) - euclidean_time(arc, s - h)) / (2.0 * h);
      const Complex dz = (geodesic_point(arc, s + h).value() - geodesic_point(arc, s - h).value()) / (2.0 * h);
      const double integrand = 0.5 * (1.0 - geodesic_point(arc, s).norm_sq()) * std::abs(dz);
      CHECK(std::abs(dt - integrand) <= 1e-7);
    }
  }
}

TEST_CASE("time integrand by direct expansion") {
  // Printed form of t(s), usable where cosh does not overflow.
  const double r = 1.3;
  const GeodesicArc arc(r, 0.0);
  const double root = std::sqrt(1.0 + r * r);
  for (double s : {-5.0, -1.0, 0.3, 2.0, 10.0}) {
    const double printed = r * r * root * std::sinh(s) / (root * std::cosh(s) + r) -
                           2.0 * r * r * r * std::atan((root - r) * std::tanh(s / 2.0));
    CHECK(euclidean_time(arc, s) == doctest::Approx(printed).epsilon(1e-13));
  }
}
