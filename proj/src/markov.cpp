#include "octwalk/markov.hpp"

#include "number_format.hpp"
#include "octwalk/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

namespace octwalk {

namespace {

std::size_t slot(int index) { return static_cast<std::size_t>(index - 1); }

bool is_plus(int index) { return index % 2 == 1; }

double max_entry(const Matrix8& m) {
  double out = 0.0;
  for (const auto& row : m) {
    for (double x : row) {
      out = std::max(out, x);
    }
  }
  return out;
}

Matrix8 multiply(const Matrix8& a, const Matrix8& b) {
  Matrix8 out{};
  for (std::size_t i = 0; i < 8; ++i) {
    for (std::size_t k = 0; k < 8; ++k) {
      if (a[i][k] == 0.0) {
        continue;
      }
      for (std::size_t j = 0; j < 8; ++j) {
        out[i][j] += a[i][k] * b[k][j];
      }
    }
  }
  return out;
}

/// Transition weights P^t(i|j) = p(i|j) exp(q (N + 1 - t)/N xi_ij).
Matrix8 transition_weights(const XiMatrix& xi, int generations, int t, double q) {
  const double factor = q * (generations + 1 - t) / generations;
  Matrix8 out{};
  for (int i = 1; i <= 8; ++i) {
    for (int j = 1; j <= 8; ++j) {
      out[slot(i)][slot(j)] = XiMatrix::used(i, j) ? std::exp(factor * xi.at(i, j)) : 0.0;
    }
  }
  return out;
}

/// erf(x) + erf(y) for x + y > 0, routed through erfc so that the sum
/// keeps its relative precision when it is tiny.
double erf_sum(double x, double y) {
  if (x < 0.0) {
    return std::erfc(-x) - std::erfc(y);
  }
  if (y < 0.0) {
    return std::erfc(-y) - std::erfc(x);
  }
  return 2.0 - std::erfc(x) - std::erfc(y);
}

double tau_from_log_z(double log_z_q, double log_z_1, double q, double log_count) {
  return 2.0 / log_count * (log_z_q - q * log_z_1);
}

nlohmann::json matrix_json(const Matrix8& m) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& row : m) {
    out.push_back(row);
  }
  return out;
}

} // namespace

double StepLengths::operator[](int index) const {
  if (index < 1 || index > 8) {
    throw std::out_of_range(fmt::format("walk index {} outside 1..8", index));
  }
  return is_plus(index) ? l_plus : l_minus;
}

StepLengths step_lengths(const OctagonGeometry& geom) {
  return {distance_from_origin(geom.omega[0]), distance_from_origin(geom.omega[1])};
}

double XiMatrix::at(int i, int j) const { return xi[slot(i)][slot(j)]; }

bool XiMatrix::used(int i, int j) { return transition_allowed(i, j); }

double XiMatrix::min_allowed() const {
  double out = std::numeric_limits<double>::infinity();
  for (int i = 1; i <= 8; ++i) {
    for (int j = 1; j <= 8; ++j) {
      if (used(i, j)) {
        out = std::min(out, at(i, j));
      }
    }
  }
  return out;
}

double XiMatrix::max_allowed() const {
  double out = -std::numeric_limits<double>::infinity();
  for (int i = 1; i <= 8; ++i) {
    for (int j = 1; j <= 8; ++j) {
      if (used(i, j)) {
        out = std::max(out, at(i, j));
      }
    }
  }
  return out;
}

double XiMatrix::variance_allowed() const {
  double sum = 0.0;
  for (int i = 1; i <= 8; ++i) {
    for (int j = 1; j <= 8; ++j) {
      if (used(i, j)) {
        const double d = at(i, j) - mean_xi;
        sum += d * d;
      }
    }
  }
  return sum / 56.0;
}

XiMatrix xi_matrix(const OctagonGeometry& geom) {
  std::array<double, 8> step{};
  for (int i = 1; i <= 8; ++i) {
    step[slot(i)] = origin_displacement(geom.generator(i));
  }
  XiMatrix out;
  double sum = 0.0;
  for (int i = 1; i <= 8; ++i) {
    for (int j = 1; j <= 8; ++j) {
      const double two_step = origin_displacement(mobius_compose(geom.generator(i), geom.generator(j)));
      const double value = two_step - 0.5 * (step[slot(i)] + step[slot(j)]);
      out.xi[slot(i)][slot(j)] = value;
      if (XiMatrix::used(i, j)) {
        sum += value;
      }
    }
  }
  out.mean_xi = sum / 56.0;
  return out;
}

double approx_length(std::span<const int> word, const StepLengths& steps, const XiMatrix& xi) {
  if (word.empty()) {
    throw Error("empty word");
  }
  const auto n = static_cast<double>(word.size());
  double length = n * steps[word[0]];
  for (std::size_t t = 1; t < word.size(); ++t) {
    if (!transition_allowed(word[t - 1], word[t])) {
      throw ForbiddenWord(fmt::format("word backtracks at step {}", t + 1));
    }
    // Step t (0-based) is step t + 1 of the walk, weighted by N + 1 - (t + 1).
    length += (n - static_cast<double>(t)) * xi.at(word[t - 1], word[t]);
  }
  return length;
}

LengthBounds theoretical_bounds(const StepLengths& steps, const XiMatrix& xi, int generations) {
  if (generations < 1) {
    throw Error("walk depth must be at least 1");
  }
  const double n = generations;
  const double pairs = n * (n - 1.0) / 2.0;
  LengthBounds out;
  out.l_min = n * std::min(steps.l_plus, steps.l_minus) + pairs * xi.min_allowed();
  out.l_mean = n * (steps.l_plus + steps.l_minus) / 2.0 + pairs * xi.mean_xi;
  out.l_max = n * (n + 1.0) / 2.0 * std::max(steps.l_plus, steps.l_minus);
  return out;
}

ChainReport chain_partition_function(const StepLengths& steps, const XiMatrix& xi,
                                     int generations, double q) {
  if (generations < 1) {
    throw Error("walk depth must be at least 1");
  }
  ChainReport report;
  report.generations = generations;
  report.q = q;
  report.within_validity = std::abs(q) <= kChainValidityQ;

  // Forward iteration of the weight vector, renormalized every step.
  std::array<double, 8> weights{};
  double shift = std::max(q * steps.l_plus, q * steps.l_minus);
  for (int i = 1; i <= 8; ++i) {
    weights[slot(i)] = std::exp(q * steps[i] - shift);
  }
  double log_scale = shift;

  Matrix8 kernel{};
  for (std::size_t i = 0; i < 8; ++i) {
    kernel[i][i] = 1.0;
  }
  double kernel_log_scale = 0.0;

  for (int t = 2; t <= generations; ++t) {
    const Matrix8 p = transition_weights(xi, generations, t, q);
    std::array<double, 8> next{};
    for (std::size_t i = 0; i < 8; ++i) {
      for (std::size_t j = 0; j < 8; ++j) {
        next[j] += weights[i] * p[i][j];
      }
    }
    const double top = *std::ranges::max_element(next);
    for (double& w : next) {
      w /= top;
    }
    weights = next;
    log_scale += std::log(top);

    kernel = multiply(kernel, p);
    const double kmax = max_entry(kernel);
    for (auto& row : kernel) {
      for (double& x : row) {
        x /= kmax;
      }
    }
    kernel_log_scale += std::log(kmax);
  }
  double total = 0.0;
  for (double w : weights) {
    total += w;
  }
  report.log_z_chain = log_scale + std::log(total);

  report.kernel = kernel;
  report.kernel_log_scale = kernel_log_scale;
  double plus_sum = 0.0;
  double minus_sum = 0.0;
  for (int i = 1; i <= 8; ++i) {
    double row_sum = 0.0;
    for (double x : kernel[slot(i)]) {
      row_sum += x;
    }
    report.k_vector[slot(i)] = row_sum;
    (is_plus(i) ? plus_sum : minus_sum) += row_sum;
    for (std::size_t f = 0; f < 8; ++f) {
      report.transition_probs[slot(i)][f] = kernel[slot(i)][f] / row_sum;
    }
  }
  report.k_plus = plus_sum / 4.0;
  report.k_minus = minus_sum / 4.0;
  for (int i = 1; i <= 8; ++i) {
    const double family = is_plus(i) ? report.k_plus : report.k_minus;
    report.decomposition_residual = std::max(
        report.decomposition_residual, std::abs(report.k_vector[slot(i)] - family) / family);
  }

  const double lp = q * steps.l_plus;
  const double lm = q * steps.l_minus;
  const double m = std::max(lp, lm);
  report.log_z_decomposed =
      kernel_log_scale + m +
      std::log(4.0 * std::exp(lp - m) * report.k_plus + 4.0 * std::exp(lm - m) * report.k_minus);
  return report;
}

double mean_length_from(const StepLengths& steps, const XiMatrix& xi, int initial,
                        int generations) {
  if (generations < 1) {
    throw Error("walk depth must be at least 1");
  }
  const double n = generations;
  double expected = n * steps[initial];
  std::array<double, 8> dist{};
  dist[slot(initial)] = 1.0;
  for (int t = 2; t <= generations; ++t) {
    std::array<double, 8> next{};
    double step_xi = 0.0;
    for (int i = 1; i <= 8; ++i) {
      const double pi = dist[slot(i)];
      if (pi == 0.0) {
        continue;
      }
      for (int j = 1; j <= 8; ++j) {
        if (XiMatrix::used(i, j)) {
          next[slot(j)] += pi / 7.0;
          step_xi += pi / 7.0 * xi.at(i, j);
        }
      }
    }
    expected += (n + 1.0 - t) * step_xi;
    dist = next;
  }
  return expected;
}

MeanStepLimit mean_step_limit(const XiMatrix& xi, int probe_generations) {
  const StepLengths steps{xi.at(1, 1), xi.at(2, 2)};
  MeanStepLimit out;
  out.limit = xi.mean_xi / 2.0;
  out.probe_generations = probe_generations;
  const double n = probe_generations;
  out.finite_value = theoretical_bounds(steps, xi, probe_generations).l_mean / (n * n);
  out.converged = std::abs(out.finite_value - out.limit) < 10.0 / n;
  return out;
}

GaussianParams gaussian_params(const StepLengths& steps, const XiMatrix& xi, int generations) {
  const double n = generations;
  return {theoretical_bounds(steps, xi, generations).l_mean / (n * n),
          xi.variance_allowed() / 3.0};
}

Cutoffs default_cutoffs(const StepLengths& steps, const XiMatrix& xi, int generations) {
  const auto bounds = theoretical_bounds(steps, xi, generations);
  return {bounds.l_min / generations, bounds.l_max / generations};
}

GaussianResult gaussian_closed_form(const StepLengths& steps, const XiMatrix& xi, int generations,
                                    double q, const Cutoffs& cutoffs) {
  const auto [mean_step, s2] = gaussian_params(steps, xi, generations);
  if (!(s2 > 0.0)) {
    throw DegenerateVariance(fmt::format("step variance s^2 = {} is not positive", s2));
  }
  const double n = generations;
  const double centre = n * mean_step;
  const double shift = q * n * s2;
  const double width = std::sqrt(2.0 * n * s2);
  const double num = erf_sum((cutoffs.l_max - centre - shift) / width,
                             (centre + shift - cutoffs.l_min) / width);
  const double den =
      erf_sum((cutoffs.l_max - centre) / width, (centre - cutoffs.l_min) / width);

  GaussianResult out;
  out.c_coeff = num / den;
  out.log_z = std::log(8.0 / 7.0) + std::log(out.c_coeff) +
              n * (0.5 * q * q * s2 + q * mean_step + std::log(7.0));
  return out;
}

TauComparison compare_tau(const LengthSpectrum& spectrum, const OctagonGeometry& geom,
                          const QGrid& grid) {
  const int n = spectrum.generation;
  const auto steps = step_lengths(geom);
  const auto xi = xi_matrix(geom);
  const auto cutoffs = default_cutoffs(steps, xi, n);
  const double log_count = std::log(static_cast<double>(walk_count(n)));

  const double exact_1 = partition_function(spectrum, 1.0);
  const double chain_1 = chain_partition_function(steps, xi, n, 1.0).log_z_chain;
  const double gauss_1 = gaussian_closed_form(steps, xi, n, 1.0, cutoffs).log_z;

  TauComparison out;
  for (double q : grid.values()) {
    TauComparisonRow row;
    row.q = q;
    row.tau_exact = tau_from_log_z(partition_function(spectrum, q), exact_1, q, log_count);
    row.tau_chain =
        tau_from_log_z(chain_partition_function(steps, xi, n, q).log_z_chain, chain_1, q, log_count);
    row.tau_gaussian =
        tau_from_log_z(gaussian_closed_form(steps, xi, n, q, cutoffs).log_z, gauss_1, q, log_count);
    out.rows.push_back(row);

    const ColumnDiffs diffs{std::abs(row.tau_exact - row.tau_chain),
                            std::abs(row.tau_exact - row.tau_gaussian),
                            std::abs(row.tau_chain - row.tau_gaussian)};
    auto widen = [&](ColumnDiffs& acc) {
      acc.exact_chain = std::max(acc.exact_chain, diffs.exact_chain);
      acc.exact_gaussian = std::max(acc.exact_gaussian, diffs.exact_gaussian);
      acc.chain_gaussian = std::max(acc.chain_gaussian, diffs.chain_gaussian);
    };
    widen(out.max_abs_diff);
    if (std::abs(q) <= 1.0) {
      widen(out.max_abs_diff_small_q);
    }
  }
  return out;
}

nlohmann::json to_json(const ChainReport& report, const StepLengths& steps, const XiMatrix& xi,
                       const GaussianResult& gaussian) {
  nlohmann::json j;
  j["N"] = report.generations;
  j["q"] = report.q;
  j["l_plus"] = steps.l_plus;
  j["l_minus"] = steps.l_minus;
  j["xi_mean"] = xi.mean_xi;
  j["log_z_chain"] = report.log_z_chain;
  j["log_z_decomposed"] = report.log_z_decomposed;
  j["log_z_gaussian"] = gaussian.log_z;
  j["c_coeff"] = gaussian.c_coeff;
  j["transition_probs"] = matrix_json(report.transition_probs);
  j["k_plus"] = report.k_plus;
  j["k_minus"] = report.k_minus;
  j["kernel_log_scale"] = report.kernel_log_scale;
  j["decomposition_residual"] = report.decomposition_residual;
  j["within_validity"] = report.within_validity;
  return j;
}

void write_comparison_csv(std::ostream& out, const TauComparison& comparison) {
  out << "q,tau_exact,tau_chain,tau_gaussian\n";
  for (const auto& row : comparison.rows) {
    out << detail::csv_number(row.q) << ',' << detail::csv_number(row.tau_exact) << ','
        << detail::csv_number(row.tau_chain) << ',' << detail::csv_number(row.tau_gaussian) << '\n';
  }
}

} // namespace octwalk
