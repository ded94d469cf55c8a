#include "octwalk/multifractal.hpp"

#include "number_format.hpp"
#include "octwalk/error.hpp"

#include <fmt/format.h>

#include <cmath>
#include <ostream>

namespace octwalk {

namespace {

// Grid positions are compared against integers with this slack.
constexpr double kGridSlack = 1e-9;

bool near_integer(double x) { return std::abs(x - std::round(x)) < kGridSlack; }

double tau_scale(const LengthSpectrum& spectrum) {
  return 2.0 / std::log(static_cast<double>(spectrum.count));
}

} // namespace

QGrid::QGrid(double q_min, double q_max, double dq) : q_min_(q_min), q_max_(q_max), dq_(dq) {
  if (!(dq > 0.0) || !(q_max > q_min)) {
    throw Error(fmt::format("invalid q grid [{}, {}] step {}", q_min, q_max, dq));
  }
  if (!(q_min <= 0.0 && q_max >= 1.0) || !near_integer(q_min / dq) || !near_integer(1.0 / dq) ||
      !near_integer((q_max - q_min) / dq)) {
    throw Error(fmt::format("q grid [{}, {}] step {} must contain 0 and 1 as grid points", q_min,
                            q_max, dq));
  }
  const auto first = static_cast<long>(std::lround(q_min / dq));
  const auto last = static_cast<long>(std::lround(q_max / dq));
  const auto one = static_cast<long>(std::lround(1.0 / dq));
  values_.reserve(static_cast<std::size_t>(last - first + 1));
  for (long k = first; k <= last; ++k) {
    values_.push_back(k == one ? 1.0 : static_cast<double>(k) * dq);
  }
}

double moment(const LengthSpectrum& spectrum, double q) {
  return partition_function(spectrum, q) - q * partition_function(spectrum, 1.0);
}

double tau(const LengthSpectrum& spectrum, double q) {
  return tau_scale(spectrum) * moment(spectrum, q);
}

TauCurve spectrum_report(const LengthSpectrum& spectrum, const QGrid& grid) {
  const double scale = tau_scale(spectrum);
  const double log_z1 = partition_function(spectrum, 1.0);
  const auto& qs = grid.values();
  const std::size_t n = qs.size();
  const double dq = grid.dq();

  TauCurve curve;
  curve.generation = spectrum.generation;
  curve.points.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double q = qs[k];
    curve.points[k].q = q;
    curve.points[k].tau = scale * (partition_function(spectrum, q) - q * log_z1);
  }
  for (std::size_t k = 0; k < n; ++k) {
    auto& p = curve.points[k];
    if (k == 0) {
      p.alpha = -(curve.points[1].tau - p.tau) / dq;
    } else if (k + 1 == n) {
      p.alpha = -(p.tau - curve.points[k - 1].tau) / dq;
    } else {
      p.alpha = -(curve.points[k + 1].tau - curve.points[k - 1].tau) / (2.0 * dq);
    }
    p.f = p.q * p.alpha + p.tau;
  }
  for (auto& p : curve.points) {
    // Removable singularity at q = 1: D_1 is the limit alpha(1).
    p.d_q = std::abs(p.q - 1.0) > dq / 2.0 ? p.tau / (1.0 - p.q) : p.alpha;
  }
  return curve;
}

double information_entropy(const LengthSpectrum& spectrum, double h) {
  return -(tau(spectrum, 1.0 + h) - tau(spectrum, 1.0 - h)) / (2.0 * h);
}

AlphaExtremes alpha_extremes(const LengthSpectrum& spectrum, const QGrid& grid) {
  if (grid.q_min() > -10.0 || grid.q_max() < 10.0) {
    throw Error("alpha extremes need a q grid spanning at least [-10, 10]");
  }
  AlphaExtremes out;
  out.alpha_min_est = tau(spectrum, grid.q_max()) / (1.0 - grid.q_max());
  out.alpha_max_est = tau(spectrum, grid.q_min()) / (1.0 - grid.q_min());
  return out;
}

double unit_slope_point(const TauCurve& curve) {
  const auto& pts = curve.points;
  // Slope of segment k, placed at the segment midpoint.
  struct Segment {
    double slope;
    double f_mid;
  };
  std::vector<Segment> segments;
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
    const double da = pts[k + 1].alpha - pts[k].alpha;
    if (da == 0.0) {
      continue;
    }
    segments.push_back({(pts[k + 1].f - pts[k].f) / da, 0.5 * (pts[k].f + pts[k + 1].f)});
  }
  for (std::size_t k = 0; k + 1 < segments.size(); ++k) {
    const auto& s0 = segments[k];
    const auto& s1 = segments[k + 1];
    if ((s0.slope - 1.0) * (s1.slope - 1.0) <= 0.0 && s0.slope != s1.slope) {
      const double w = (1.0 - s0.slope) / (s1.slope - s0.slope);
      return s0.f_mid + w * (s1.f_mid - s0.f_mid);
    }
  }
  throw Error("f(alpha) curve has no unit-slope point on this grid");
}

void write_tau_csv(std::ostream& out, const TauCurve& curve) {
  out << "q,tau,alpha,f,d_q\n";
  for (const auto& p : curve.points) {
    out << detail::csv_number(p.q) << ',' << detail::csv_number(p.tau) << ','
        << detail::csv_number(p.alpha) << ',' << detail::csv_number(p.f) << ','
        << detail::csv_number(p.d_q) << '\n';
  }
}

} // namespace octwalk
