#include "octwalk/walks.hpp"

#include "number_format.hpp"
#include "octwalk/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <thread>

namespace octwalk {

namespace {

/// Per-subtree moments, min/max and streamed log-sum-exp partials.
struct Accumulator {
  std::uint64_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;
  double min = std::numeric_limits<double>::infinity();
  double max = -std::numeric_limits<double>::infinity();
  std::vector<double> lse_shift;
  std::vector<double> lse_sum;
  std::vector<double> lengths;

  explicit Accumulator(std::size_t q_count)
      : lse_shift(q_count, -std::numeric_limits<double>::infinity()), lse_sum(q_count, 0.0) {}

  void add(double length, std::span<const double> scaled_q) {
    ++count;
    const double delta = length - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (length - mean);
    min = std::min(min, length);
    max = std::max(max, length);
    for (std::size_t k = 0; k < scaled_q.size(); ++k) {
      const double x = scaled_q[k] * length;
      if (x > lse_shift[k]) {
        lse_sum[k] = lse_sum[k] * std::exp(lse_shift[k] - x) + 1.0;
        lse_shift[k] = x;
      } else {
        lse_sum[k] += std::exp(x - lse_shift[k]);
      }
    }
  }

  void merge(const Accumulator& other) {
    if (other.count == 0) {
      return;
    }
    const double n1 = static_cast<double>(count);
    const double n2 = static_cast<double>(other.count);
    const double delta = other.mean - mean;
    count += other.count;
    const double n = static_cast<double>(count);
    mean += delta * n2 / n;
    m2 += other.m2 + delta * delta * n1 * n2 / n;
    min = std::min(min, other.min);
    max = std::max(max, other.max);
    for (std::size_t k = 0; k < lse_shift.size(); ++k) {
      const double shift = std::max(lse_shift[k], other.lse_shift[k]);
      lse_sum[k] = lse_sum[k] * std::exp(lse_shift[k] - shift) +
                   other.lse_sum[k] * std::exp(other.lse_shift[k] - shift);
      lse_shift[k] = shift;
    }
    lengths.insert(lengths.end(), other.lengths.begin(), other.lengths.end());
  }
};

/// A subtree root: the first one or two letters of the word.
struct Prefix {
  std::array<int, 2> letters{};
  int depth = 0;
};

std::vector<Prefix> subtree_roots(int generations, ChildOrder order) {
  std::vector<int> letters(8);
  for (int i = 0; i < 8; ++i) {
    letters[static_cast<std::size_t>(i)] = order == ChildOrder::ascending ? i + 1 : 8 - i;
  }
  std::vector<Prefix> roots;
  for (int first : letters) {
    if (generations == 1) {
      roots.push_back({{first, 0}, 1});
      continue;
    }
    for (int second : letters) {
      if (transition_allowed(first, second)) {
        roots.push_back({{first, second}, 2});
      }
    }
  }
  return roots;
}

void enumerate_subtree(const OctagonGeometry& geom, int generations, const Prefix& root,
                       ChildOrder order, bool keep_lengths, std::span<const double> scaled_q,
                       Accumulator& acc) {
  struct Frame {
    MoebiusMap product;
    double partial = 0.0;
    int last = 0;
    int next_child = 0; // 0..7, position in the child order
  };
  const auto depth_count = static_cast<std::size_t>(generations);
  std::vector<Frame> stack(depth_count + 1);

  // Frame d holds the state after d letters.
  MoebiusMap product = MoebiusMap::identity();
  double partial = 0.0;
  for (int d = 0; d < root.depth; ++d) {
    const int letter = root.letters[static_cast<std::size_t>(d)];
    product = mobius_compose(product, geom.generator(letter));
    partial += origin_displacement(product);
  }
  auto emit = [&](double length) {
    acc.add(length, scaled_q);
    if (keep_lengths) {
      acc.lengths.push_back(length);
    }
  };
  if (root.depth == generations) {
    emit(partial);
    return;
  }

  auto top = static_cast<std::size_t>(root.depth);
  const auto base = top;
  stack[top] = {product, partial, root.letters[top - 1], 0};
  while (true) {
    Frame& frame = stack[top];
    if (frame.next_child == 8) {
      if (top == base) {
        break;
      }
      --top;
      continue;
    }
    const int k = frame.next_child++;
    const int letter = order == ChildOrder::ascending ? k + 1 : 8 - k;
    if (!transition_allowed(frame.last, letter)) {
      continue;
    }
    const MoebiusMap next = mobius_compose(frame.product, geom.generator(letter));
    const double sum = frame.partial + origin_displacement(next);
    if (top + 1 == depth_count) {
      emit(sum);
      continue;
    }
    stack[top + 1] = {next, sum, letter, 0};
    ++top;
  }
}

} // namespace

std::uint64_t walk_count(int generations) {
  if (generations < 1) {
    throw Error("walk depth must be at least 1");
  }
  std::uint64_t count = 8;
  for (int t = 1; t < generations; ++t) {
    count *= 7;
  }
  return count;
}

bool transition_allowed(int i, int j) { return std::abs(i - j) != 4; }

LengthSpectrum enumerate_spectrum(const OctagonGeometry& geom, const WalkPolicy& policy,
                                  const EnumerationOptions& options) {
  const int n = policy.generations;
  if (n < 1) {
    throw Error("walk depth must be at least 1");
  }
  if (n > policy.max_generations_guard) {
    throw GenerationBudgetExceeded(
        fmt::format("N = {} exceeds the enumeration guard of {} ({} walks)", n,
                    policy.max_generations_guard, walk_count(n)));
  }

  std::vector<double> scaled_q;
  scaled_q.reserve(options.q_values.size());
  for (double q : options.q_values) {
    scaled_q.push_back(q / n);
  }

  const auto roots = subtree_roots(n, options.order);
  std::vector<Accumulator> partials(roots.size(), Accumulator(scaled_q.size()));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t task = next++; task < roots.size(); task = next++) {
      enumerate_subtree(geom, n, roots[task], options.order, options.keep_lengths, scaled_q,
                        partials[task]);
    }
  };
  const unsigned workers =
      std::clamp<unsigned>(options.workers, 1u, static_cast<unsigned>(roots.size()));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back(work);
    }
  }

  // Fixed-order reduction keeps the result independent of scheduling.
  Accumulator total(scaled_q.size());
  if (options.keep_lengths) {
    total.lengths.reserve(walk_count(n));
  }
  for (const auto& part : partials) {
    total.merge(part);
  }

  LengthSpectrum spectrum;
  spectrum.generation = n;
  spectrum.count = total.count;
  spectrum.mean = total.mean;
  spectrum.variance = total.m2 / static_cast<double>(total.count);
  spectrum.min = total.min;
  spectrum.max = total.max;
  spectrum.lengths = std::move(total.lengths);
  spectrum.q_values = options.q_values;
  for (std::size_t k = 0; k < scaled_q.size(); ++k) {
    spectrum.log_partition.push_back(total.lse_shift[k] + std::log(total.lse_sum[k]));
  }
  return spectrum;
}

double walk_length(const OctagonGeometry& geom, std::span<const int> word) {
  MoebiusMap product = MoebiusMap::identity();
  double length = 0.0;
  for (std::size_t t = 0; t < word.size(); ++t) {
    if (t > 0 && !transition_allowed(word[t - 1], word[t])) {
      throw ForbiddenWord(fmt::format("word backtracks at step {}", t + 1));
    }
    product = mobius_compose(product, geom.generator(word[t]));
    length += origin_displacement(product);
  }
  return length;
}

double partition_function(const LengthSpectrum& spectrum, double q) {
  if (spectrum.lengths.empty()) {
    for (std::size_t k = 0; k < spectrum.q_values.size(); ++k) {
      if (spectrum.q_values[k] == q) {
        return spectrum.log_partition[k];
      }
    }
    throw Error(fmt::format("spectrum holds no lengths and no streamed sum for q = {}", q));
  }
  const double scale = q / spectrum.generation;
  double shift = -std::numeric_limits<double>::infinity();
  for (double length : spectrum.lengths) {
    shift = std::max(shift, scale * length);
  }
  double sum = 0.0;
  for (double length : spectrum.lengths) {
    sum += std::exp(scale * length - shift);
  }
  return shift + std::log(sum);
}

double GaussianFit::operator()(double length) const {
  if (variance <= 0.0) {
    return length == mean ? amplitude : 0.0;
  }
  const double d = length - mean;
  return amplitude * std::exp(-d * d / (2.0 * variance));
}

Histogram histogram(const LengthSpectrum& spectrum, int bins) {
  if (bins < 10) {
    throw Error(fmt::format("histogram needs at least 10 bins, got {}", bins));
  }
  if (spectrum.lengths.empty()) {
    throw Error("histogram needs the raw spectrum (keep_lengths)");
  }
  double lo = spectrum.min;
  double hi = spectrum.max;
  if (hi <= lo) {
    // All lengths coincide; centre a unit-width range on them.
    lo -= 0.5;
    hi += 0.5;
  }
  const double width = (hi - lo) / bins;

  Histogram hist;
  const auto bin_count = static_cast<std::size_t>(bins);
  hist.bin_edges.resize(bin_count + 1);
  for (std::size_t k = 0; k < bin_count; ++k) {
    hist.bin_edges[k] = lo + static_cast<double>(k) * width;
  }
  hist.bin_edges[bin_count] = hi;
  hist.counts.assign(bin_count, 0);
  for (double length : spectrum.lengths) {
    const auto k = static_cast<std::size_t>(std::max(0.0, std::floor((length - lo) / width)));
    ++hist.counts[std::min(k, bin_count - 1)];
  }

  const auto total = static_cast<double>(spectrum.count);
  hist.gaussian_fit.mean = spectrum.mean;
  hist.gaussian_fit.variance = spectrum.variance;
  hist.gaussian_fit.amplitude =
      spectrum.variance > 0.0
          ? total * width / std::sqrt(2.0 * std::numbers::pi * spectrum.variance)
          : total;
  return hist;
}

void write_spectrum_csv(std::ostream& out, const LengthSpectrum& spectrum) {
  out << "index,length\n";
  for (std::size_t k = 0; k < spectrum.lengths.size(); ++k) {
    out << k << ',' << detail::csv_number(spectrum.lengths[k]) << '\n';
  }
}

void write_histogram_csv(std::ostream& out, const Histogram& hist) {
  out << "bin_left,bin_right,count\n";
  for (std::size_t k = 0; k < hist.counts.size(); ++k) {
    out << detail::csv_number(hist.bin_edges[k]) << ',' << detail::csv_number(hist.bin_edges[k + 1])
        << ',' << hist.counts[k] << '\n';
  }
}

} // namespace octwalk
