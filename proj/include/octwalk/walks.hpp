#pragma once

#include "octwalk/octagon.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace octwalk {

/// Walk depth N and the largest N the caller is willing to enumerate.
/// 8 * 7^11 ~ 1.6e10 walks at the default guard.
struct WalkPolicy {
  int generations = 1;
  int max_generations_guard = 12;
};

/// v(N) = 8 * 7^(N-1), the number of directed walks with N steps.
std::uint64_t walk_count(int generations);

/// Step j may follow step i unless it undoes it (|i - j| = 4).
bool transition_allowed(int i, int j);

enum class ChildOrder { ascending, descending };

struct EnumerationOptions {
  unsigned workers = 1;
  /// Retain every length. Needed for histograms and partition sums at
  /// arbitrary q; otherwise only moments and the q_values sums are kept.
  bool keep_lengths = true;
  ChildOrder order = ChildOrder::ascending;
  /// ln Z_N(q) is accumulated on the fly for each of these.
  std::vector<double> q_values;
};

/// Integrated lengths L = sum_t d(0, z_t) of all walks of one depth.
/// With ascending child order, lengths[k] belongs to the k-th admissible
/// word in lexicographic order.
struct LengthSpectrum {
  int generation = 0;
  std::vector<double> lengths;
  std::uint64_t count = 0;
  double mean = 0.0;
  double variance = 0.0;
  double min = 0.0;
  double max = 0.0;
  std::vector<double> q_values;
  std::vector<double> log_partition;
};

LengthSpectrum enumerate_spectrum(const OctagonGeometry& geom, const WalkPolicy& policy,
                                  const EnumerationOptions& options = {});

/// Exact integrated length of a single word of 1-based walk indices.
double walk_length(const OctagonGeometry& geom, std::span<const int> word);

/// ln sum_i exp(q L_i / N), accumulated with a max shift.
double partition_function(const LengthSpectrum& spectrum, double q);

struct GaussianFit {
  double mean = 0.0;
  double variance = 0.0;
  double amplitude = 0.0;

  /// Expected count in a bin centred at L.
  double operator()(double length) const;
};

struct Histogram {
  std::vector<double> bin_edges;
  std::vector<std::uint64_t> counts;
  GaussianFit gaussian_fit;
};

inline constexpr int kDefaultBins = 60;

/// Uniform bins over [min, max] with a moment-matched Gaussian.
Histogram histogram(const LengthSpectrum& spectrum, int bins = kDefaultBins);

/// `index,length`, one row per walk.
void write_spectrum_csv(std::ostream& out, const LengthSpectrum& spectrum);
/// `bin_left,bin_right,count`.
void write_histogram_csv(std::ostream& out, const Histogram& hist);

} // namespace octwalk
