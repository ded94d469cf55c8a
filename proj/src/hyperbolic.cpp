#include "octwalk/hyperbolic.hpp"

#include "octwalk/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace octwalk {

namespace {

// Rounding can land an image point exactly on (or a hair past) the unit
// circle when it is within ~1e-16 of the boundary.
DiskPoint pull_inside(Complex z) {
  const double r = std::abs(z);
  constexpr double r_max = 1.0 - std::numeric_limits<double>::epsilon() / 2.0;
  if (r >= 1.0) {
    z *= r_max / r;
  }
  return DiskPoint{z};
}

} // namespace

DiskPoint::DiskPoint(Complex z) : z_(z) {
  if (!(std::norm(z) < 1.0)) {
    throw InvalidPoint("point (" + std::to_string(z.real()) + ", " + std::to_string(z.imag()) +
                       ") is not inside the unit disk");
  }
}

MoebiusMap MoebiusMap::from_pair(Complex u, Complex v, Normalize mode) {
  if (mode == Normalize::full) {
    const double det = std::norm(u) - std::norm(v);
    if (!(det > 0.0)) {
      throw Error("not an SU(1,1) matrix: |u|^2 - |v|^2 <= 0");
    }
    const double scale = 1.0 / std::sqrt(det);
    u *= scale;
    v *= scale;
  }
  if (u.real() < 0.0 || (u.real() == 0.0 && u.imag() < 0.0)) {
    u = -u;
    v = -v;
  }
  return MoebiusMap{u, v};
}

MoebiusMap MoebiusMap::inverse() const { return from_pair(std::conj(u_), -v_, Normalize::sign_only); }

GeodesicArc::GeodesicArc(double r, double phi) : radius(r) {
  if (!(r > 0.0)) {
    throw Error("geodesic arc radius must be positive");
  }
  constexpr double two_pi = 2.0 * std::numbers::pi;
  angle = std::fmod(phi, two_pi);
  if (angle < 0.0) {
    angle += two_pi;
  }
}

Complex GeodesicArc::center() const { return std::polar(std::sqrt(1.0 + radius * radius), angle); }

double hyperbolic_distance(const DiskPoint& z, const DiskPoint& w) {
  const double num = 2.0 * std::norm(z.value() - w.value());
  const double den = (1.0 - z.norm_sq()) * (1.0 - w.norm_sq());
  return std::acosh(std::max(1.0, 1.0 + num / den));
}

double distance_from_origin(const DiskPoint& z) {
  const double r = z.abs();
  return std::log((1.0 + r) / (1.0 - r));
}

double origin_displacement(const MoebiusMap& m) { return 2.0 * std::asinh(std::abs(m.v())); }

DiskPoint mobius_apply(const MoebiusMap& m, const DiskPoint& z) {
  const Complex w = z.value();
  return pull_inside((m.u() * w + m.v()) / (std::conj(m.v()) * w + std::conj(m.u())));
}

MoebiusMap mobius_compose(const MoebiusMap& first, const MoebiusMap& second) {
  const Complex u = first.u() * second.u() + first.v() * std::conj(second.v());
  const Complex v = first.u() * second.v() + first.v() * std::conj(second.u());
  // |u|^2 - |v|^2 cancels badly once the entries are large (long words), so
  // a deviation inside its own rounding error is not real drift. Rescaling
  // by it would cost ~eps |v|^2 relative accuracy in every entry.
  const double size = std::norm(u) + std::norm(v);
  const double det = std::norm(u) - std::norm(v);
  if (std::abs(det - 1.0) <= 8.0 * std::numeric_limits<double>::epsilon() * size) {
    return MoebiusMap::from_pair(u, v, MoebiusMap::Normalize::sign_only);
  }
  return MoebiusMap::from_pair(u, v);
}

double map_distance(const MoebiusMap& a, const MoebiusMap& b) {
  return std::max(std::abs(a.u() - b.u()), std::abs(a.v() - b.v()));
}

MoebiusMap half_turn_matrix(const DiskPoint& p) {
  const double p2 = p.norm_sq();
  const double scale = -1.0 / (1.0 - p2);
  return MoebiusMap::from_pair(scale * (1.0 + p2), scale * 2.0 * p.value());
}

MoebiusMap translation_matrix(const DiskPoint& omega) {
  const double scale = -1.0 / std::sqrt(1.0 - omega.norm_sq());
  return MoebiusMap::from_pair(Complex{scale, 0.0}, scale * omega.value());
}

bool is_hyperbolic(const MoebiusMap& m) { return std::abs(m.trace()) > 2.0; }

DiskPoint geodesic_point(const GeodesicArc& arc, double s) {
  // y carries the sign that puts the arc on the circle around arc.center().
  const double r = arc.radius;
  const double c = std::cos(arc.angle);
  const double sn = std::sin(arc.angle);
  // Numerator and denominator divided through by cosh(s).
  const double th = std::tanh(s);
  const double den = std::sqrt(1.0 + r * r) + r / std::cosh(s);
  const double x = (c + r * sn * th) / den;
  const double y = (sn - r * c * th) / den;
  return pull_inside(Complex{x, y});
}

} // namespace octwalk
