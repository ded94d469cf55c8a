#pragma once

#include <complex>

namespace octwalk {

using Complex = std::complex<double>;

/// A point of the open Poincare disk. Construction rejects |z| >= 1.
class DiskPoint {
public:
  DiskPoint() = default;
  explicit DiskPoint(Complex z);
  DiskPoint(double re, double im) : DiskPoint(Complex{re, im}) {}

  Complex value() const { return z_; }
  double re() const { return z_.real(); }
  double im() const { return z_.imag(); }
  double abs() const { return std::abs(z_); }
  double norm_sq() const { return std::norm(z_); }

  friend bool operator==(const DiskPoint&, const DiskPoint&) = default;

private:
  Complex z_{0.0, 0.0};
};

/// Element of PSU(1,1), stored as the first row (u, v) of
///
///     | u        v       |
///     | conj(v)  conj(u) |
///
/// Every instance satisfies |u|^2 - |v|^2 = 1 (up to rounding in the
/// entries) and is sign-canonical
/// (Re u > 0, or Re u == 0 and Im u >= 0), so equal maps compare equal.
class MoebiusMap {
public:
  MoebiusMap() = default;

  enum class Normalize { full, sign_only };

  /// Normalizes an arbitrary SU(1,1)-shaped pair to unit determinant and
  /// picks the canonical sign. full requires |u| > |v|. sign_only is for pairs
  /// already unit-determinant up to rounding.
  static MoebiusMap from_pair(Complex u, Complex v, Normalize mode = Normalize::full);
  static MoebiusMap identity() { return {}; }

  Complex u() const { return u_; }
  Complex v() const { return v_; }

  MoebiusMap inverse() const;
  double trace() const { return 2.0 * u_.real(); }
  double determinant() const { return std::norm(u_) - std::norm(v_); }

  friend bool operator==(const MoebiusMap&, const MoebiusMap&) = default;

private:
  MoebiusMap(Complex u, Complex v) : u_(u), v_(v) {}

  Complex u_{1.0, 0.0};
  Complex v_{0.0, 0.0};
};

/// Circular arc orthogonal to the unit circle. The center sits at
/// sqrt(1 + R^2) * exp(i * angle), outside the disk.
struct GeodesicArc {
  double radius = 1.0;
  double angle = 0.0;

  GeodesicArc() = default;
  GeodesicArc(double radius, double angle);

  Complex center() const;
};

double hyperbolic_distance(const DiskPoint& z, const DiskPoint& w);
double distance_from_origin(const DiskPoint& z);

/// d(0, m[0]), evaluated from the matrix entries as 2 asinh|v|. Unlike
/// distance_from_origin(apply(m, 0)) this keeps full relative precision
/// when the image point is close to the boundary.
double origin_displacement(const MoebiusMap& m);

DiskPoint mobius_apply(const MoebiusMap& m, const DiskPoint& z);
MoebiusMap mobius_compose(const MoebiusMap& first, const MoebiusMap& second);

/// Max-norm distance between canonical representatives.
double map_distance(const MoebiusMap& a, const MoebiusMap& b);

/// Product of two half turns: around the origin, then around p.
MoebiusMap half_turn_matrix(const DiskPoint& p);
/// Hyperbolic translation carrying 0 to omega.
MoebiusMap translation_matrix(const DiskPoint& omega);

bool is_hyperbolic(const MoebiusMap& m);

/// Point at signed proper length s along the arc; s = 0 is the point of
/// the arc nearest the origin. Points closer to the boundary than double
/// resolution allows are pulled in to the largest radius below 1.
DiskPoint geodesic_point(const GeodesicArc& arc, double s);

} // namespace octwalk
