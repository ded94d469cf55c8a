#include "octwalk/octagon.hpp"

#include "octwalk/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace octwalk {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kQuarterTurn = kPi / 2.0;

const Complex kI{0.0, 1.0};

nlohmann::json complex_json(Complex z) { return nlohmann::json::array({z.real(), z.imag()}); }

} // namespace

double admissibility_bound(double alpha) {
  return 1.0 / (std::numbers::sqrt2 * std::cos(alpha - kPi / 4.0));
}

bool admissible(const ModuleParams& params) {
  const auto [a, alpha] = params;
  if (!(alpha > 0.0 && alpha < kQuarterTurn && a > 0.0 && a < 1.0)) {
    return false;
  }
  return a - admissibility_bound(alpha) > kAdmissibilityMargin;
}

const MoebiusMap& OctagonGeometry::generator(int index) const {
  if (index < 1 || index > 8) {
    throw std::out_of_range(fmt::format("generator index {} outside 1..8", index));
  }
  return generators[static_cast<std::size_t>(index - 1)];
}

OctagonGeometry build(const ModuleParams& params) {
  if (!admissible(params)) {
    throw InadmissibleModule(
        fmt::format("module (a = {}, alpha = {}) is not admissible: need 0 < alpha < pi/2 and "
                    "1/(sqrt(2) cos(alpha - pi/4)) = {:.6f} < a < 1",
                    params.a, params.alpha, admissibility_bound(params.alpha)));
  }
  const double a = params.a;
  const double alpha = params.alpha;
  const double a2 = a * a;
  const double shift = std::tan(alpha - kPi / 4.0);
  const double c2 = std::pow(std::cos(alpha - kPi / 4.0), 2);

  OctagonGeometry g;
  g.params = params;
  g.t_plus = a2 + shift;
  g.t_minus = a2 - shift;
  g.r_plus = std::hypot(g.t_plus, 1.0 - a2) / (2.0 * a);
  g.r_minus = std::hypot(g.t_minus, 1.0 - a2) / (2.0 * a);
  g.phi_plus = std::atan(g.t_plus / (1.0 + a2));
  g.phi_minus = std::atan((1.0 + a2) / g.t_minus);
  g.beta = std::atan2((1.0 - a2) * 2.0 * a2 * c2, 2.0 * a2 * c2 - 1.0);
  g.gamma_angle = kQuarterTurn - g.beta;
  g.b = 1.0 / (std::numbers::sqrt2 * a * std::cos(alpha - kPi / 4.0));

  for (int k = 0; k < 4; ++k) {
    const double turn = k * kQuarterTurn;
    const auto j = static_cast<std::size_t>(2 * k);
    g.vertices[j] = DiskPoint{std::polar(a, turn)};
    g.vertices[j + 1] = DiskPoint{std::polar(g.b, alpha + turn)};
    g.sides[j] = GeodesicArc{g.r_plus, g.phi_plus + turn};
    g.sides[j + 1] = GeodesicArc{g.r_minus, g.phi_minus + turn};
  }

  const double b2 = g.b * g.b;
  const Complex shared = g.b * std::polar(1.0, alpha) * (1.0 - a2);
  const Complex omega_plus = (shared + a * (1.0 - b2)) / (1.0 - a2 * b2);
  const Complex omega_minus = (shared + a * kI * (1.0 - b2)) / (1.0 - a2 * b2);
  g.omega = {DiskPoint{omega_plus}, DiskPoint{omega_minus}, DiskPoint{kI * omega_plus},
             DiskPoint{kI * omega_minus}};

  for (std::size_t k = 0; k < 4; ++k) {
    const Complex w = g.omega[k].value();
    g.midpoints[k] = DiskPoint{w / (1.0 + std::sqrt(1.0 - std::norm(w)))};
    g.generators[k] = translation_matrix(g.omega[k]);
    g.generators[k + 4] = g.generators[k].inverse();
  }
  return g;
}

double appendix_b_residual(const OctagonGeometry& geom) {
  const double a = geom.params.a;
  const double alpha = geom.params.alpha;
  const double b = geom.b;
  const double sp = std::sqrt(1.0 + geom.r_plus * geom.r_plus);
  const double sm = std::sqrt(1.0 + geom.r_minus * geom.r_minus);
  const double rr = geom.r_plus * geom.r_minus;
  const double spread = geom.phi_minus - geom.phi_plus;

  // At each vertex the third condition is the law of cosines for the two
  // circle centres; the angle between radii there is pi minus the interior
  // angle.
  const std::array<double, 7> residuals = {
      geom.beta + geom.gamma_angle - kQuarterTurn,
      1.0 + a * a - 2.0 * a * sp * std::cos(geom.phi_plus),
      1.0 + a * a - 2.0 * a * sm * std::sin(geom.phi_minus),
      a * a - a * (sp * std::cos(geom.phi_plus) + sm * std::sin(geom.phi_minus)) +
          sp * sm * std::sin(spread) + rr * std::cos(geom.beta),
      1.0 + b * b - 2.0 * b * sp * std::cos(alpha - geom.phi_plus),
      1.0 + b * b - 2.0 * b * sm * std::cos(geom.phi_minus - alpha),
      b * b - b * (sp * std::cos(alpha - geom.phi_plus) + sm * std::cos(geom.phi_minus - alpha)) +
          sp * sm * std::cos(spread) + rr * std::cos(geom.gamma_angle),
  };
  double worst = 0.0;
  for (double r : residuals) {
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

MoebiusMap evaluate_word(const OctagonGeometry& geom, std::span<const int> word) {
  MoebiusMap product = MoebiusMap::identity();
  for (int index : word) {
    product = mobius_compose(product, geom.generator(index));
  }
  return product;
}

double check_group_relation(const OctagonGeometry& geom) {
  // g0 g1^-1 g2 g3^-1 g0^-1 g1 g2^-1 g3 in walk indices.
  static constexpr std::array<int, 8> relation = {1, 6, 3, 8, 5, 2, 7, 4};
  return map_distance(evaluate_word(geom, relation), MoebiusMap::identity());
}

std::array<DiskPoint, 8> neighbor_centers(const OctagonGeometry& geom) {
  std::array<DiskPoint, 8> centers;
  std::ranges::transform(geom.generators, centers.begin(),
                         [](const MoebiusMap& m) { return mobius_apply(m, DiskPoint{}); });
  return centers;
}

nlohmann::json to_json(const OctagonGeometry& geom) {
  using nlohmann::json;
  json j;
  j["a"] = geom.params.a;
  j["alpha"] = geom.params.alpha;
  j["t_plus"] = geom.t_plus;
  j["t_minus"] = geom.t_minus;
  j["r_plus"] = geom.r_plus;
  j["r_minus"] = geom.r_minus;
  j["phi_plus"] = geom.phi_plus;
  j["phi_minus"] = geom.phi_minus;
  j["b"] = geom.b;
  j["beta"] = geom.beta;
  j["gamma_angle"] = geom.gamma_angle;

  json vertices = json::array();
  for (const auto& v : geom.vertices) {
    vertices.push_back(complex_json(v.value()));
  }
  j["vertices"] = vertices;

  json sides = json::array();
  for (const auto& s : geom.sides) {
    sides.push_back({{"radius", s.radius}, {"angle", s.angle}});
  }
  j["sides"] = sides;

  json omega = json::array();
  json midpoints = json::array();
  for (std::size_t k = 0; k < 4; ++k) {
    omega.push_back(complex_json(geom.omega[k].value()));
    midpoints.push_back(complex_json(geom.midpoints[k].value()));
  }
  j["omega"] = omega;
  j["midpoints"] = midpoints;

  json generators = json::array();
  for (const auto& m : geom.generators) {
    generators.push_back({{"u", complex_json(m.u())}, {"v", complex_json(m.v())}});
  }
  j["generators"] = generators;
  return j;
}

} // namespace octwalk
