#pragma once

#include "octwalk/hyperbolic.hpp"

#include "json.hpp"

#include <array>
#include <span>

namespace octwalk {

/// The single free module (a, alpha) of the symmetric genus-two octagon:
/// vertex radius a and angular offset alpha of the second vertex family.
struct ModuleParams {
  double a = 0.0;
  double alpha = 0.0;
};

/// a must exceed the admissibility bound by at least this much.
inline constexpr double kAdmissibilityMargin = 1e-9;

/// Lower bound on a for the given alpha: 1 / (sqrt(2) cos(alpha - pi/4)).
double admissibility_bound(double alpha);
bool admissible(const ModuleParams& params);

/// Fundamental octagon and its side-pairing group.
///
/// Vertices alternate a*i^k and b*exp(i(alpha + k pi/2)), starting at a.
/// sides[j] joins vertices[j] and vertices[j+1]: even sides are "+" arcs
/// (R+, phi+ + k pi/2), odd sides are "-" arcs (R-, phi- + k pi/2).
///
/// generators[0..7] hold g0, g1, g2, g3, g0^-1, g1^-1, g2^-1, g3^-1, so that
/// the walk index i = 1..8 addresses generators[i-1] and i, i+4 are
/// mutually inverse.
struct OctagonGeometry {
  ModuleParams params;
  double t_plus = 0.0;
  double t_minus = 0.0;
  double r_plus = 0.0;
  double r_minus = 0.0;
  double phi_plus = 0.0;
  double phi_minus = 0.0;
  double b = 0.0;
  double beta = 0.0;
  double gamma_angle = 0.0;
  std::array<DiskPoint, 8> vertices;
  std::array<GeodesicArc, 8> sides;
  std::array<DiskPoint, 4> omega;
  std::array<DiskPoint, 4> midpoints;
  std::array<MoebiusMap, 8> generators;

  /// 1-based walk index, matching gamma_1..gamma_8.
  const MoebiusMap& generator(int index) const;
};

/// Throws InadmissibleModule unless admissible(params).
OctagonGeometry build(const ModuleParams& params);

/// Largest absolute residual of the closed system fixing R+-, phi+-, b,
/// beta and gamma: the angle sum beta + gamma = pi/2 plus the three
/// intersection conditions at each of the vertices a and b*exp(i alpha).
double appendix_b_residual(const OctagonGeometry& geom);

/// Product of generators along a word of 1-based walk indices, applied
/// right to left (the last letter acts first).
MoebiusMap evaluate_word(const OctagonGeometry& geom, std::span<const int> word);

/// Distance from the identity of g0 g1^-1 g2 g3^-1 g0^-1 g1 g2^-1 g3.
double check_group_relation(const OctagonGeometry& geom);

/// Images gamma_i[0], i = 1..8: the first generation of the Cayley tree.
std::array<DiskPoint, 8> neighbor_centers(const OctagonGeometry& geom);

nlohmann::json to_json(const OctagonGeometry& geom);

} // namespace octwalk
