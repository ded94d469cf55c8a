#pragma once

#include "octwalk/walks.hpp"

#include <iosfwd>
#include <vector>

namespace octwalk {

/// Uniform grid q_min, q_min + dq, ..., q_max. Both 0 and 1 must fall
/// on grid points; they anchor tau(0) = 2 and tau(1) = 0.
class QGrid {
public:
  QGrid(double q_min, double q_max, double dq);

  double q_min() const { return q_min_; }
  double q_max() const { return q_max_; }
  double dq() const { return dq_; }
  std::size_t size() const { return values_.size(); }
  const std::vector<double>& values() const { return values_; }

private:
  double q_min_;
  double q_max_;
  double dq_;
  std::vector<double> values_;
};

struct TauPoint {
  double q = 0.0;
  double tau = 0.0;
  double alpha = 0.0;
  double f = 0.0;
  double d_q = 0.0;
};

struct TauCurve {
  std::vector<TauPoint> points;
  /// tau is the finite-depth estimate tau_N at this N.
  int generation = 0;
};

/// ln m_N(q) = ln Z_N(q) - q ln Z_N(1).
double moment(const LengthSpectrum& spectrum, double q);

/// tau_N(q) = 2 ln m_N(q) / ln v(N).
double tau(const LengthSpectrum& spectrum, double q);

/// tau, alpha = -dtau/dq (central differences, one-sided at the grid
/// ends), f = q alpha + tau and D_q = tau / (1 - q), with D_1 = alpha(1).
TauCurve spectrum_report(const LengthSpectrum& spectrum, const QGrid& grid);

inline constexpr double kEntropyStep = 1e-3;

/// S = alpha(1) = -tau'(1) by a central difference of half-width h.
double information_entropy(const LengthSpectrum& spectrum, double h = kEntropyStep);

struct AlphaExtremes {
  double alpha_min_est = 0.0;
  double alpha_max_est = 0.0;
};

/// tau(q) / (1 - q) at the grid ends, finite-q proxies for the q -> +-inf
/// limits. Requires the grid to cover [-10, 10].
AlphaExtremes alpha_extremes(const LengthSpectrum& spectrum, const QGrid& grid);

/// Value of the f(alpha) curve where its slope df/dalpha crosses 1,
/// located by linear interpolation between neighbouring samples.
double unit_slope_point(const TauCurve& curve);

/// `q,tau,alpha,f,d_q`.
void write_tau_csv(std::ostream& out, const TauCurve& curve);

} // namespace octwalk
