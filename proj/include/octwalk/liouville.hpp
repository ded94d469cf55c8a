#pragma once

#include "octwalk/hyperbolic.hpp"

#include <functional>
#include <span>

namespace octwalk {

/// Radial Liouville solution U(r) = A^2 / (r^2 sinh^2(A ln r + C)).
/// A = 1, C = 0 gives the Poincare conformal factor 4 / (1 - r^2)^2.
struct PotentialParams {
  double amp = 1.0;
  double offset = 0.0;
};

/// Throws SingularRadius where sinh(A ln r + C) vanishes.
double potential(const PotentialParams& params, double r);

/// Radius where the potential is singular, exp(-C / A).
double singular_radius(const PotentialParams& params);

inline constexpr double kResidualStep = 1e-5;

/// max over the grid of |U'' + U'/r - U'^2/U - 2 U^2| / U^2 with central
/// differences of step h. The stencil is evaluated in long double.
double ode_residual(const std::function<long double(long double)>& u,
                    std::span<const double> r_grid, double h = kResidualStep);

double liouville_residual(const PotentialParams& params, std::span<const double> r_grid);

/// Poincare conformal factor 4 / (1 - r^2)^2.
double poincare_factor(double r);

/// Length^2 of the tangent vector (dr, dphi) at radius r in the metric
/// U(r)(dr^2 + r^2 dphi^2).
double potential_line_element(const PotentialParams& params, double r, double dr, double dphi);

/// Same vector carried to the disk by rho = exp(C) r^A, theta = A phi, and
/// measured with the Poincare metric. Equals potential_line_element where
/// rho < 1.
double poincare_pullback_line_element(const PotentialParams& params, double r, double dr,
                                      double dphi);

/// Euclidean time t(s) accumulated along a geodesic of radius R, where s is
/// hyperbolic proper length.
double euclidean_time(const GeodesicArc& arc, double s);

} // namespace octwalk
