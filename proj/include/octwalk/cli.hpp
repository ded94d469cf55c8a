#pragma once

#include "json.hpp"

#include <iosfwd>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

namespace octwalk::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitBadModule = 2;
inline constexpr int kExitBudget = 3;

/// Env var overriding the enumeration guard.
inline constexpr const char* kMaxNEnv = "OCTWALK_MAX_N";

enum class OutputFormat { csv, json };

struct RunConfig {
  double a = 0.8;
  double alpha = std::numbers::pi / 3.0;
  int n = 5;
  double q_min = -10.0;
  double q_max = 10.0;
  double dq = 0.01;
  int bins = 60;
  unsigned workers = 1;
  std::string out_dir = ".";
  OutputFormat format = OutputFormat::csv;
  /// Liouville potential constants A and C, and the arc radius used for
  /// the s -> t table.
  double potential_amp = 1.0;
  double potential_offset = 0.0;
  double arc_radius = 1.0;
  /// q values reported by `markov`.
  std::vector<double> markov_q = {-1.0, -0.5, 0.0, 0.5, 1.0};
  int max_generations = 12;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

nlohmann::json to_json(const RunConfig& config);
/// Missing keys keep their defaults; unknown keys are rejected.
RunConfig config_from_json(const nlohmann::json& j);

/// Radians, or "pi", "pi/k", "m*pi/k".
double parse_angle(std::string_view text);

/// 64-bit FNV-1a of the canonical JSON of the fields that affect results
/// (workers, output location and format are excluded), as 16 hex digits.
std::string config_hash(const RunConfig& config);

/// Runs one subcommand: octagon, spectrum, tau, falpha, markov, compare,
/// potential. Files go to config.out_dir; progress goes to `log`.
int run_command(std::string_view command, const RunConfig& config, std::ostream& log,
                std::ostream& err);

/// Full command line entry point.
int run_cli(int argc, const char* const* argv, std::ostream& log, std::ostream& err);

} // namespace octwalk::cli
