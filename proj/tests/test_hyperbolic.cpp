#include "doctest.h"

#include "support.hpp"

#include "octwalk/error.hpp"
#include "octwalk/hyperbolic.hpp"

#include <cmath>
#include <random>

using namespace octwalk;
using testing_support::random_point;

namespace {

MoebiusMap random_map(std::mt19937_64& rng) {
  const auto p = random_point(rng, 0.9);
  const auto q = random_point(rng, 0.9);
  return mobius_compose(translation_matrix(p), half_turn_matrix(q));
}

// (u z + v) / (conj(v) z + conj(u)) written out without the library.
Complex apply_by_hand(Complex u, Complex v, Complex z) {
  return (u * z + v) / (std::conj(v) * z + std::conj(u));
}

} // namespace

TEST_CASE("disk points reject the boundary and outside") {
  CHECK_THROWS_AS(DiskPoint(1.0, 0.0), InvalidPoint);
  CHECK_THROWS_AS(DiskPoint(0.8, 0.8), InvalidPoint);
  CHECK_NOTHROW(DiskPoint(0.999, 0.0));
}

TEST_CASE("distance examples") {
  const DiskPoint origin;
  CHECK(hyperbolic_distance(origin, origin) == 0.0);

  const DiskPoint unit(std::tanh(0.5), 0.0);
  CHECK(hyperbolic_distance(origin, unit) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(distance_from_origin(unit) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(distance_from_origin(origin) == 0.0);

  CHECK(hyperbolic_distance(DiskPoint(0.5, 0.0), DiskPoint(-0.5, 0.0)) ==
        doctest::Approx(2.0 * std::log(3.0)).epsilon(1e-14));
  CHECK(distance_from_origin(DiskPoint(0.9102, 0.0)) == doctest::Approx(3.057).epsilon(2e-4));
}

TEST_CASE("distance from origin agrees with the general formula") {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 500; ++k) {
    const auto z = random_point(rng, 0.99);
    CHECK(std::abs(distance_from_origin(z) - hyperbolic_distance(DiskPoint{}, z)) <= 1e-12);
  }
}

TEST_CASE("distance is a metric on random pairs") {
  std::mt19937_64 rng(12);
  for (int k = 0; k < 1000; ++k) {
    const auto z = random_point(rng);
    const auto w = random_point(rng);
    const auto x = random_point(rng);
    const double zw = hyperbolic_distance(z, w);
    CHECK(std::abs(zw - hyperbolic_distance(w, z)) <= 1e-12);
    CHECK(zw <= hyperbolic_distance(z, x) + hyperbolic_distance(x, w) + 1e-12);
  }
}

TEST_CASE("coincident points give exactly zero") {
  const DiskPoint z(0.3, -0.7);
  CHECK(hyperbolic_distance(z, z) == 0.0);
}

TEST_CASE("maps are unit determinant and canonical") {
  std::mt19937_64 rng(13);
  for (int k = 0; k < 200; ++k) {
    const auto m = random_map(rng);
    CHECK(std::abs(m.determinant() - 1.0) <= 1e-12);
    CHECK(m.u().real() >= 0.0);
  }
  const auto m = MoebiusMap::from_pair({-2.0, 0.5}, {0.3, 1.0});
  const auto same = MoebiusMap::from_pair({4.0, -1.0}, {-0.6, -2.0});
  CHECK(map_distance(m, same) <= 1e-15);
  CHECK(m.u().real() > 0.0);
}

TEST_CASE("apply matches the fractional linear form") {
  std::mt19937_64 rng(14);
  for (int k = 0; k < 100; ++k) {
    const auto m = random_map(rng);
    const auto z = random_point(rng);
    const Complex expect = apply_by_hand(m.u(), m.v(), z.value());
    CHECK(std::abs(mobius_apply(m, z).value() - expect) <= 1e-12);
  }
}

TEST_CASE("identity, translation and half turn act as stated") {
  const DiskPoint z(0.25, -0.4);
  CHECK(mobius_apply(MoebiusMap::identity(), z) == z);

  const DiskPoint omega(0.5, 0.3);
  CHECK(std::abs(mobius_apply(translation_matrix(omega), DiskPoint{}).value() - omega.value()) <=
        1e-15);

  const DiskPoint p(-0.2, 0.6);
  const Complex image = 2.0 * p.value() / (1.0 + p.norm_sq());
  const auto h = half_turn_matrix(p);
  CHECK(std::abs(mobius_apply(h, DiskPoint{}).value() - image) <= 1e-15);
  CHECK(distance_from_origin(mobius_apply(h, DiskPoint{})) ==
        doctest::Approx(2.0 * distance_from_origin(p)).epsilon(1e-13));

  CHECK(half_turn_matrix(DiskPoint{}) == MoebiusMap::identity());
  CHECK(translation_matrix(DiskPoint{}) == MoebiusMap::identity());
}

TEST_CASE("translation equals half turn about the geodesic midpoint") {
  std::mt19937_64 rng(15);
  for (int k = 0; k < 100; ++k) {
    const auto omega = random_point(rng, 0.97);
    const Complex p = omega.value() / (1.0 + std::sqrt(1.0 - omega.norm_sq()));
    CHECK(map_distance(translation_matrix(omega), half_turn_matrix(DiskPoint{p})) <= 1e-10);
  }
}

TEST_CASE("composition identities") {
  std::mt19937_64 rng(16);
  for (int k = 0; k < 100; ++k) {
    const auto m = random_map(rng);
    CHECK(map_distance(mobius_compose(m, MoebiusMap::identity()), m) <= 1e-14);
    CHECK(map_distance(mobius_compose(m, m.inverse()), MoebiusMap::identity()) <= 1e-10);
  }
  const DiskPoint omega(0.6, 0.2);
  const auto t = translation_matrix(omega);
  CHECK(distance_from_origin(mobius_apply(mobius_compose(t, t), DiskPoint{})) ==
        doctest::Approx(2.0 * distance_from_origin(omega)).epsilon(1e-12));
}

TEST_CASE("composition associates with application") {
  std::mt19937_64 rng(17);
  for (int k = 0; k < 1000; ++k) {
    const auto m1 = random_map(rng);
    const auto m2 = random_map(rng);
    const auto z = random_point(rng, 0.5);
    const auto lhs = mobius_apply(mobius_compose(m1, m2), z);
    const auto rhs = mobius_apply(m1, mobius_apply(m2, z));
    CHECK(std::abs(lhs.value() - rhs.value()) <= 1e-10);
  }
}

TEST_CASE("generator-type maps are isometries") {
  std::mt19937_64 rng(18);
  for (int k = 0; k < 500; ++k) {
    const auto p = random_point(rng, 0.8);
    const auto maps = {half_turn_matrix(p), translation_matrix(p)};
    const auto z = random_point(rng, 0.8);
    const auto w = random_point(rng, 0.8);
    for (const auto& m : maps) {
      const double before = hyperbolic_distance(z, w);
      const double after = hyperbolic_distance(mobius_apply(m, z), mobius_apply(m, w));
      CHECK(std::abs(before - after) <= 1e-10 * std::max(1.0, before));
    }
  }
}

TEST_CASE("origin displacement matches the image distance") {
  std::mt19937_64 rng(19);
  for (int k = 0; k < 200; ++k) {
    const auto m = random_map(rng);
    const double direct = distance_from_origin(mobius_apply(m, DiskPoint{}));
    CHECK(origin_displacement(m) == doctest::Approx(direct).epsilon(1e-9));
  }
}

TEST_CASE("powers and conjugates of translations") {
  std::mt19937_64 rng(20);
  for (int k = 0; k < 50; ++k) {
    const auto g = translation_matrix(random_point(rng, 0.8));
    const auto h = translation_matrix(random_point(rng, 0.8));
    const double ell = origin_displacement(g);
    auto power = MoebiusMap::identity();
    for (int n = 1; n <= 6; ++n) {
      power = mobius_compose(power, g);
      CHECK(origin_displacement(power) == doctest::Approx(n * ell).epsilon(1e-9));
    }
    const auto hz = mobius_apply(h, DiskPoint{});
    const auto hgz = mobius_apply(mobius_compose(h, g), DiskPoint{});
    CHECK(std::abs(hyperbolic_distance(hz, hgz) - ell) <= 1e-9 * std::max(1.0, ell));
  }
}

TEST_CASE("hyperbolicity by trace") {
  CHECK_FALSE(is_hyperbolic(MoebiusMap::identity()));
  const auto m = translation_matrix(DiskPoint(0.9102, 0.0));
  CHECK(is_hyperbolic(m));
  CHECK(m.trace() == doctest::Approx(2.0 / std::sqrt(1.0 - 0.9102 * 0.9102)));
}

TEST_CASE("geodesic arcs") {
  const GeodesicArc arc(0.7, 1.1);
  CHECK(std::abs(std::abs(arc.center()) - std::sqrt(1.0 + 0.49)) <= 1e-15);
  CHECK_THROWS_AS(GeodesicArc(0.0, 1.0), Error);
  CHECK(GeodesicArc(1.0, -1.0).angle == doctest::Approx(2.0 * std::numbers::pi - 1.0));

  const auto nearest = geodesic_point(arc, 0.0);
  CHECK(nearest.abs() == doctest::Approx(std::sqrt(1.49) - 0.7).epsilon(1e-14));
  CHECK(geodesic_point(arc, 40.0).abs() > 1.0 - 1e-6);
  CHECK(geodesic_point(arc, -40.0).abs() > 1.0 - 1e-6);

  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> radius(0.2, 3.0);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::uniform_real_distribution<double> param(-3.0, 3.0);
  for (int k = 0; k < 300; ++k) {
    const GeodesicArc g(radius(rng), angle(rng));
    const double s1 = param(rng);
    const double s2 = param(rng);
    const auto z1 = geodesic_point(g, s1);
    CHECK(std::abs(std::norm(z1.value() - g.center()) - g.radius * g.radius) <= 1e-12);
    CHECK(hyperbolic_distance(z1, geodesic_point(g, s2)) == doctest::Approx(std::abs(s1 - s2)).epsilon(1e-9));
  }
}

TEST_CASE("long products keep relative precision") {
  // Entries grow like exp(n l / 2); renormalizing by the rounded
  // determinant would cost eps * |v|^2 here.
  const auto g = translation_matrix(DiskPoint(0.0, 0.96));
  const double ell = origin_displacement(g);
  auto power = MoebiusMap::identity();
  for (int n = 1; n <= 12; ++n) {
    power = mobius_compose(power, g);
    CHECK(std::abs(origin_displacement(power) - n * ell) <= 1e-13 * n * ell);
  }
}
