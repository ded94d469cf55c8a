#include "octwalk/liouville.hpp"

#include "octwalk/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace octwalk {

double potential(const PotentialParams& params, double r) {
  if (params.amp == 0.0) {
    throw Error("potential needs A != 0");
  }
  if (!(r > 0.0)) {
    throw Error(fmt::format("potential needs r > 0, got {}", r));
  }
  const double sh = std::sinh(params.amp * std::log(r) + params.offset);
  if (sh == 0.0) {
    throw SingularRadius(fmt::format("potential is singular at r = {}", r));
  }
  return params.amp * params.amp / (r * r * sh * sh);
}

double singular_radius(const PotentialParams& params) {
  return std::exp(-params.offset / params.amp);
}

double ode_residual(const std::function<long double(long double)>& u,
                    std::span<const double> r_grid, double h) {
  // In double the second difference loses about eps * U / h^2, which at
  // h = 1e-5 is already ~1e-6 relative to U^2.
  const long double step = h;
  double worst = 0.0;
  for (double r : r_grid) {
    const long double x = r;
    const long double lo = u(x - step);
    const long double mid = u(x);
    const long double hi = u(x + step);
    const long double d1 = (hi - lo) / (2.0L * step);
    const long double d2 = (hi - 2.0L * mid + lo) / (step * step);
    const long double lhs = d2 + d1 / x - d1 * d1 / mid;
    worst = std::max(worst, static_cast<double>(std::abs(lhs - 2.0L * mid * mid) / (mid * mid)));
  }
  return worst;
}

double liouville_residual(const PotentialParams& params, std::span<const double> r_grid) {
  if (!(params.amp != 0.0)) {
    throw Error("potential needs A != 0");
  }
  const long double amp = params.amp;
  const long double offset = params.offset;
  return ode_residual(
      [&](long double r) {
        const long double sh = std::sinh(amp * std::log(r) + offset);
        if (sh == 0.0L) {
          throw SingularRadius(fmt::format("potential is singular at r = {}", static_cast<double>(r)));
        }
        return amp * amp / (r * r * sh * sh);
      },
      r_grid);
}

double poincare_factor(double r) {
  const double d = 1.0 - r * r;
  return 4.0 / (d * d);
}

double potential_line_element(const PotentialParams& params, double r, double dr, double dphi) {
  return potential(params, r) * (dr * dr + r * r * dphi * dphi);
}

double poincare_pullback_line_element(const PotentialParams& params, double r, double dr,
                                      double dphi) {
  const double a = params.amp;
  const double rho = std::exp(params.offset) * std::pow(r, a);
  const double drho = a * rho / r * dr;
  const double dtheta = a * dphi;
  return poincare_factor(rho) * (drho * drho + rho * rho * dtheta * dtheta);
}

double euclidean_time(const GeodesicArc& arc, double s) {
  const double r = arc.radius;
  const double root = std::sqrt(1.0 + r * r);
  // First term divided through by cosh(s).
  return r * r * root * std::tanh(s) / (root + r / std::cosh(s)) -
         2.0 * r * r * r * std::atan((root - r) * std::tanh(s / 2.0));
}

} // namespace octwalk
