#pragma once

#include "octwalk/multifractal.hpp"
#include "octwalk/octagon.hpp"
#include "octwalk/walks.hpp"

#include "json.hpp"

#include <array>
#include <iosfwd>
#include <span>
#include <vector>

namespace octwalk {

using Matrix8 = std::array<std::array<double, 8>, 8>;

/// One-step lengths d(0, gamma_i[0]). Odd walk indices (g0, g2 and their
/// inverses) carry l_plus, even ones l_minus.
struct StepLengths {
  double l_plus = 0.0;
  double l_minus = 0.0;

  /// 1-based walk index.
  double operator[](int index) const;
};

StepLengths step_lengths(const OctagonGeometry& geom);

/// Second-generation corrections xi_ij = d(0, gamma_i gamma_j [0]) - (l_i + l_j)/2.
/// Entries at backtracking pairs (|i - j| = 4) are stored but never used.
struct XiMatrix {
  Matrix8 xi{};
  /// Uniform average over the 56 allowed pairs.
  double mean_xi = 0.0;

  /// 1-based walk indices.
  double at(int i, int j) const;
  static bool used(int i, int j);

  double min_allowed() const;
  double max_allowed() const;
  /// Population variance over the 56 allowed pairs.
  double variance_allowed() const;
};

XiMatrix xi_matrix(const OctagonGeometry& geom);

/// N l_{i1} + sum_{t=2..N} (N + 1 - t) xi_{i_{t-1}, i_t}. Throws ForbiddenWord
/// on a backtracking word.
double approx_length(std::span<const int> word, const StepLengths& steps, const XiMatrix& xi);

struct LengthBounds {
  double l_min = 0.0;
  double l_mean = 0.0;
  double l_max = 0.0;
};

LengthBounds theoretical_bounds(const StepLengths& steps, const XiMatrix& xi, int generations);

/// Multiplicative-chain approximation of Z_N(q) at one (N, q).
///
/// The kernel K_{i,f} = sum over interior indices of prod_{t=2..N} P^t is
/// stored divided by exp(kernel_log_scale); so are k_vector, k_plus and
/// k_minus. transition_probs is scale free.
struct ChainReport {
  int generations = 0;
  double q = 0.0;
  Matrix8 kernel{};
  double kernel_log_scale = 0.0;
  std::array<double, 8> k_vector{};
  double k_plus = 0.0;
  double k_minus = 0.0;
  /// max_i |K_i - K_family(i)| / K_family(i).
  double decomposition_residual = 0.0;
  Matrix8 transition_probs{};
  /// Forward vector iteration from the initial weights exp(q l_i).
  double log_z_chain = 0.0;
  /// 4 exp(q l+) K+ + 4 exp(q l-) K-.
  double log_z_decomposed = 0.0;
  /// False for |q| > kChainValidityQ; the approximation is a small-|q| one.
  bool within_validity = true;
};

inline constexpr double kChainValidityQ = 2.0;

ChainReport chain_partition_function(const StepLengths& steps, const XiMatrix& xi,
                                     int generations, double q);

/// Expected approximate length of a uniformly random admissible walk
/// whose first step is `initial`.
double mean_length_from(const StepLengths& steps, const XiMatrix& xi, int initial,
                        int generations);

struct MeanStepLimit {
  double limit = 0.0;
  double finite_value = 0.0;
  int probe_generations = 0;
  bool converged = false;
};

/// xi_mean / 2, together with L_mean(N)/N^2 at N = probe_generations and
/// whether they agree to 10/N. l+- are read off the diagonal of xi.
MeanStepLimit mean_step_limit(const XiMatrix& xi, int probe_generations = 1000);

struct GaussianParams {
  double mean_step = 0.0;
  double step_variance = 0.0;
};

/// mean_step = L_mean(N) / N^2 and step_variance = Var_allowed(xi) / 3.
GaussianParams gaussian_params(const StepLengths& steps, const XiMatrix& xi, int generations);

/// Integration window for the per-step length l = L / N. Infinite ends
/// are allowed.
struct Cutoffs {
  double l_min = 0.0;
  double l_max = 0.0;
};

Cutoffs default_cutoffs(const StepLengths& steps, const XiMatrix& xi, int generations);

struct GaussianResult {
  double log_z = 0.0;
  double c_coeff = 0.0;
};

/// ln Z ~ ln(8/7) + ln C_N(q) + N (q^2 s^2 / 2 + q l + ln 7).
/// Throws DegenerateVariance when s^2 <= 0.
GaussianResult gaussian_closed_form(const StepLengths& steps, const XiMatrix& xi, int generations,
                                    double q, const Cutoffs& cutoffs);

struct TauComparisonRow {
  double q = 0.0;
  double tau_exact = 0.0;
  double tau_chain = 0.0;
  double tau_gaussian = 0.0;
};

struct ColumnDiffs {
  double exact_chain = 0.0;
  double exact_gaussian = 0.0;
  double chain_gaussian = 0.0;
};

struct TauComparison {
  std::vector<TauComparisonRow> rows;
  ColumnDiffs max_abs_diff;
  /// Same, restricted to |q| <= 1.
  ColumnDiffs max_abs_diff_small_q;
};

TauComparison compare_tau(const LengthSpectrum& spectrum, const OctagonGeometry& geom,
                          const QGrid& grid);

nlohmann::json to_json(const ChainReport& report, const StepLengths& steps, const XiMatrix& xi,
                       const GaussianResult& gaussian);

/// `q,tau_exact,tau_chain,tau_gaussian`.
void write_comparison_csv(std::ostream& out, const TauComparison& comparison);

} // namespace octwalk
