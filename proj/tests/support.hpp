#pragma once

#include "octwalk/octagon.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace testing_support {

inline const octwalk::ModuleParams kRegular{std::pow(2.0, -0.25), std::numbers::pi / 4.0};
inline const octwalk::ModuleParams kWide{0.8, std::numbers::pi / 3.0};
inline const octwalk::ModuleParams kNarrow{0.9, std::numbers::pi / 8.0};

// Modules away from the a -> 1 edge, where the generators get within a few
// ulps of the boundary and the group relation loses digits.
inline octwalk::ModuleParams random_module(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> angle(0.15, std::numbers::pi / 2.0 - 0.15);
  const double alpha = angle(rng);
  const double lo = octwalk::admissibility_bound(alpha) + 0.005;
  std::uniform_real_distribution<double> radius(lo, 0.97);
  return {radius(rng), alpha};
}

inline octwalk::DiskPoint random_point(std::mt19937_64& rng, double max_radius = 0.95) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double r = max_radius * std::sqrt(u(rng));
  const double t = 2.0 * std::numbers::pi * u(rng);
  return octwalk::DiskPoint(std::polar(r, t));
}

} // namespace testing_support
