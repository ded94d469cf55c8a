#include "octwalk/cli.hpp"

#include "number_format.hpp"
#include "octwalk/error.hpp"
#include "octwalk/liouville.hpp"
#include "octwalk/markov.hpp"
#include "octwalk/multifractal.hpp"
#include "octwalk/octagon.hpp"
#include "octwalk/walks.hpp"

#include "CLI11.hpp"

#include <fmt/format.h>

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <regex>
#include <sstream>

namespace octwalk::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kToolName = "octwalk";
constexpr const char* kToolVersion = OCTWALK_VERSION;

// Checks that must hold for `octagon` and `potential` to exit 0.
constexpr double kGeometryTolerance = 1e-8;
constexpr double kResidualTolerance = 1e-6;

// Potential report grids.
constexpr double kRadiusFirst = 0.1;
constexpr double kRadiusLast = 0.9;
constexpr double kRadiusStep = 0.01;
constexpr double kSingularExclusion = 0.05;
constexpr double kTimeSpan = 3.0;
constexpr double kTimeStep = 0.1;

std::string format_name(OutputFormat f) { return f == OutputFormat::csv ? "csv" : "json"; }

OutputFormat parse_format(const std::string& s) {
  if (s == "csv") {
    return OutputFormat::csv;
  }
  if (s == "json") {
    return OutputFormat::json;
  }
  throw Error(fmt::format("unknown output format '{}'", s));
}

std::optional<double> parse_number(std::string_view text) {
  double value = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end) {
    return std::nullopt;
  }
  return value;
}

json physics_json(const RunConfig& c) {
  json j = to_json(c);
  j.erase("workers");
  j.erase("out");
  j.erase("format");
  j.erase("max_n");
  return j;
}

json metadata(const RunConfig& c, std::string_view command) {
  return {{"tool", kToolName},
          {"version", kToolVersion},
          {"command", command},
          {"a", c.a},
          {"alpha_module", c.alpha},
          {"N", c.n},
          {"config_hash", config_hash(c)}};
}

std::string csv_preamble(const RunConfig& c, std::string_view command) {
  return fmt::format("# {} {}\n# command={} a={} alpha={} N={} config_hash={}\n", kToolName,
                     kToolVersion, command, detail::csv_number(c.a), detail::csv_number(c.alpha),
                     c.n, config_hash(c));
}

class OutputDir {
public:
  explicit OutputDir(const RunConfig& config) : root_(config.out_dir) {
    fs::create_directories(root_);
  }

  void write(const std::string& name, const std::function<void(std::ostream&)>& body,
             std::ostream& log) const {
    const fs::path path = root_ / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) {
      throw Error(fmt::format("cannot open {} for writing", path.string()));
    }
    body(out);
    log << "wrote " << path.string() << '\n';
  }

  void write_json(const std::string& name, const json& j, std::ostream& log) const {
    write(name, [&](std::ostream& out) { out << j.dump(2) << '\n'; }, log);
  }

private:
  fs::path root_;
};

WalkPolicy policy_for(const RunConfig& c) { return {c.n, c.max_generations}; }

LengthSpectrum enumerate(const OctagonGeometry& geom, const RunConfig& c) {
  EnumerationOptions options;
  options.workers = c.workers;
  return enumerate_spectrum(geom, policy_for(c), options);
}

json spectrum_summary(const RunConfig& c, std::string_view command, const LengthSpectrum& s,
                      const QGrid& grid) {
  json j;
  j["meta"] = metadata(c, command);
  j["N"] = s.generation;
  j["a"] = c.a;
  j["alpha_module"] = c.alpha;
  j["count"] = s.count;
  j["mean"] = s.mean;
  j["variance"] = s.variance;
  j["min"] = s.min;
  j["max"] = s.max;
  j["entropy"] = information_entropy(s);
  j["tau_finite_n"] = true;
  if (grid.q_min() <= -10.0 && grid.q_max() >= 10.0) {
    const auto ext = alpha_extremes(s, grid);
    j["alpha_min_est"] = ext.alpha_min_est;
    j["alpha_max_est"] = ext.alpha_max_est;
  } else {
    j["alpha_min_est"] = nullptr;
    j["alpha_max_est"] = nullptr;
  }
  return j;
}

json tau_curve_json(const TauCurve& curve) {
  json rows = json::array();
  for (const auto& p : curve.points) {
    rows.push_back({{"q", p.q}, {"tau", p.tau}, {"alpha", p.alpha}, {"f", p.f}, {"d_q", p.d_q}});
  }
  return rows;
}

int cmd_octagon(const RunConfig& c, std::ostream& log) {
  const auto geom = build({c.a, c.alpha});
  const double residual = appendix_b_residual(geom);
  const double relation = check_group_relation(geom);

  json j;
  j["meta"] = metadata(c, "octagon");
  j["geometry"] = to_json(geom);
  j["appendix_b_residual"] = residual;
  j["group_relation_deviation"] = relation;
  json distances = json::array();
  for (const auto& p : neighbor_centers(geom)) {
    distances.push_back(distance_from_origin(p));
  }
  j["neighbor_distances"] = distances;

  OutputDir out(c);
  out.write_json("octagon.json", j, log);
  log << fmt::format("b = {}\nbeta = {}\nappendix_b_residual = {:.3e}\ngroup_relation_deviation = "
                     "{:.3e}\n",
                     detail::csv_number(geom.b), detail::csv_number(geom.beta), residual, relation);
  return residual <= kGeometryTolerance && relation <= kGeometryTolerance ? kExitOk : kExitFailure;
}

int cmd_walk_family(std::string_view command, const RunConfig& c, std::ostream& log) {
  const auto geom = build({c.a, c.alpha});
  const auto spectrum = enumerate(geom, c);
  const QGrid grid(c.q_min, c.q_max, c.dq);
  OutputDir out(c);
  const bool csv = c.format == OutputFormat::csv;

  if (command == "spectrum") {
    const auto hist = histogram(spectrum, c.bins);
    if (csv) {
      out.write("spectrum.csv", [&](std::ostream& os) {
        os << csv_preamble(c, command);
        write_spectrum_csv(os, spectrum);
      }, log);
      out.write("histogram.csv", [&](std::ostream& os) {
        os << csv_preamble(c, command);
        write_histogram_csv(os, hist);
      }, log);
    } else {
      out.write_json("spectrum.json", {{"meta", metadata(c, command)}, {"lengths", spectrum.lengths}},
                     log);
      out.write_json("histogram.json",
                     {{"meta", metadata(c, command)},
                      {"bin_edges", hist.bin_edges},
                      {"counts", hist.counts},
                      {"gaussian_fit",
                       {{"mean", hist.gaussian_fit.mean},
                        {"variance", hist.gaussian_fit.variance},
                        {"amplitude", hist.gaussian_fit.amplitude}}}},
                     log);
    }
  } else {
    const auto curve = spectrum_report(spectrum, grid);
    const std::string stem = std::string(command);
    if (csv) {
      out.write(stem + ".csv", [&](std::ostream& os) {
        os << csv_preamble(c, command);
        write_tau_csv(os, curve);
      }, log);
    } else {
      out.write_json(stem + ".json", {{"meta", metadata(c, command)}, {"points", tau_curve_json(curve)}},
                     log);
    }
  }

  const json summary = spectrum_summary(c, command, spectrum, grid);
  out.write_json("summary.json", summary, log);
  log << fmt::format("N = {} count = {} mean = {} variance = {} entropy = {}\n", spectrum.generation,
                     spectrum.count, detail::csv_number(spectrum.mean),
                     detail::csv_number(spectrum.variance),
                     detail::csv_number(summary["entropy"].get<double>()));
  return kExitOk;
}

int cmd_markov(const RunConfig& c, std::ostream& log) {
  const auto geom = build({c.a, c.alpha});
  const auto steps = step_lengths(geom);
  const auto xi = xi_matrix(geom);
  const auto cutoffs = default_cutoffs(steps, xi, c.n);

  json reports = json::array();
  for (double q : c.markov_q) {
    const auto chain = chain_partition_function(steps, xi, c.n, q);
    const auto gaussian = gaussian_closed_form(steps, xi, c.n, q, cutoffs);
    reports.push_back(to_json(chain, steps, xi, gaussian));
  }
  const auto limit = mean_step_limit(xi);
  json j;
  j["meta"] = metadata(c, "markov");
  j["reports"] = reports;
  j["mean_step_limit"] = {{"limit", limit.limit},
                          {"finite_value", limit.finite_value},
                          {"probe_N", limit.probe_generations},
                          {"converged", limit.converged}};
  OutputDir out(c);
  out.write_json("markov.json", j, log);
  return kExitOk;
}

int cmd_compare(const RunConfig& c, std::ostream& log) {
  const auto geom = build({c.a, c.alpha});
  const auto spectrum = enumerate(geom, c);
  const QGrid grid(c.q_min, c.q_max, c.dq);
  const auto table = compare_tau(spectrum, geom, grid);

  auto diffs_json = [](const ColumnDiffs& d) {
    return json{{"exact_chain", d.exact_chain},
                {"exact_gaussian", d.exact_gaussian},
                {"chain_gaussian", d.chain_gaussian}};
  };
  OutputDir out(c);
  if (c.format == OutputFormat::csv) {
    out.write("compare.csv", [&](std::ostream& os) {
      os << csv_preamble(c, "compare");
      write_comparison_csv(os, table);
    }, log);
  } else {
    json rows = json::array();
    for (const auto& r : table.rows) {
      rows.push_back({{"q", r.q},
                      {"tau_exact", r.tau_exact},
                      {"tau_chain", r.tau_chain},
                      {"tau_gaussian", r.tau_gaussian}});
    }
    out.write_json("compare_table.json", {{"meta", metadata(c, "compare")}, {"rows", rows}}, log);
  }
  out.write_json("compare.json",
                 {{"meta", metadata(c, "compare")},
                  {"max_abs_diff", diffs_json(table.max_abs_diff)},
                  {"max_abs_diff_abs_q_le_1", diffs_json(table.max_abs_diff_small_q)}},
                 log);
  return kExitOk;
}

int cmd_potential(const RunConfig& c, std::ostream& log) {
  const PotentialParams params{c.potential_amp, c.potential_offset};
  const double singular = singular_radius(params);

  struct Row {
    double r, u, residual;
  };
  std::vector<Row> rows;
  double worst = 0.0;
  const int steps = static_cast<int>(std::lround((kRadiusLast - kRadiusFirst) / kRadiusStep));
  for (int k = 0; k <= steps; ++k) {
    const double r = kRadiusFirst + k * kRadiusStep;
    if (std::abs(r - singular) < kSingularExclusion) {
      continue;
    }
    const double grid[] = {r};
    const double residual = liouville_residual(params, grid);
    worst = std::max(worst, residual);
    rows.push_back({r, potential(params, r), residual});
  }

  const GeodesicArc arc{c.arc_radius, 0.0};
  std::vector<std::pair<double, double>> times;
  const int time_steps = static_cast<int>(std::lround(2.0 * kTimeSpan / kTimeStep));
  for (int k = 0; k <= time_steps; ++k) {
    const double s = -kTimeSpan + k * kTimeStep;
    times.emplace_back(s, euclidean_time(arc, s));
  }

  OutputDir out(c);
  if (c.format == OutputFormat::csv) {
    out.write("potential.csv", [&](std::ostream& os) {
      os << csv_preamble(c, "potential")
         << fmt::format("# A={} C={}\n", detail::csv_number(params.amp),
                        detail::csv_number(params.offset))
         << "r,U,residual\n";
      for (const auto& row : rows) {
        os << detail::csv_number(row.r) << ',' << detail::csv_number(row.u) << ','
           << detail::csv_number(row.residual) << '\n';
      }
    }, log);
    out.write("time.csv", [&](std::ostream& os) {
      os << csv_preamble(c, "potential")
         << fmt::format("# R={}\n", detail::csv_number(c.arc_radius)) << "s,t\n";
      for (const auto& [s, t] : times) {
        os << detail::csv_number(s) << ',' << detail::csv_number(t) << '\n';
      }
    }, log);
  } else {
    json pot = json::array();
    for (const auto& row : rows) {
      pot.push_back({{"r", row.r}, {"U", row.u}, {"residual", row.residual}});
    }
    json tt = json::array();
    for (const auto& [s, t] : times) {
      tt.push_back({{"s", s}, {"t", t}});
    }
    out.write_json("potential.json", {{"meta", metadata(c, "potential")}, {"rows", pot}}, log);
    out.write_json("time.json", {{"meta", metadata(c, "potential")}, {"rows", tt}}, log);
  }
  log << fmt::format("max liouville residual = {:.3e}\n", worst);
  return worst <= kResidualTolerance ? kExitOk : kExitFailure;
}

} // namespace

json to_json(const RunConfig& c) {
  return {{"a", c.a},
          {"alpha", c.alpha},
          {"n", c.n},
          {"qmin", c.q_min},
          {"qmax", c.q_max},
          {"dq", c.dq},
          {"bins", c.bins},
          {"workers", c.workers},
          {"out", c.out_dir},
          {"format", format_name(c.format)},
          {"A", c.potential_amp},
          {"C", c.potential_offset},
          {"R", c.arc_radius},
          {"markov_q", c.markov_q},
          {"max_n", c.max_generations}};
}

RunConfig config_from_json(const json& j) {
  if (!j.is_object()) {
    throw Error("config must be a JSON object");
  }
  RunConfig c;
  const json defaults = to_json(c);
  for (const auto& [key, value] : j.items()) {
    if (!defaults.contains(key)) {
      throw Error(fmt::format("unknown config key '{}'", key));
    }
  }
  auto pick = [&](const char* key, auto& field) {
    if (j.contains(key)) {
      j.at(key).get_to(field);
    }
  };
  if (j.contains("alpha") && j.at("alpha").is_string()) {
    c.alpha = parse_angle(j.at("alpha").get<std::string>());
  } else {
    pick("alpha", c.alpha);
  }
  pick("a", c.a);
  pick("n", c.n);
  pick("qmin", c.q_min);
  pick("qmax", c.q_max);
  pick("dq", c.dq);
  pick("bins", c.bins);
  pick("workers", c.workers);
  pick("out", c.out_dir);
  if (j.contains("format")) {
    c.format = parse_format(j.at("format").get<std::string>());
  }
  pick("A", c.potential_amp);
  pick("C", c.potential_offset);
  pick("R", c.arc_radius);
  pick("markov_q", c.markov_q);
  pick("max_n", c.max_generations);
  return c;
}

double parse_angle(std::string_view text) {
  const std::string s(text);
  if (const auto value = parse_number(s)) {
    return *value;
  }
  static const std::regex pi_form(R"(^\s*(?:([0-9]*\.?[0-9]+)\s*\*\s*)?pi\s*(?:/\s*([0-9]*\.?[0-9]+))?\s*$)",
                                  std::regex::icase);
  std::smatch m;
  if (!std::regex_match(s, m, pi_form)) {
    throw Error(fmt::format("cannot parse angle '{}': use radians or pi/k", s));
  }
  const double factor = m[1].matched ? *parse_number(m[1].str()) : 1.0;
  const double divisor = m[2].matched ? *parse_number(m[2].str()) : 1.0;
  if (divisor == 0.0) {
    throw Error(fmt::format("cannot parse angle '{}': division by zero", s));
  }
  return factor * std::numbers::pi / divisor;
}

std::string config_hash(const RunConfig& config) {
  const std::string canonical = physics_json(config).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canonical) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return fmt::format("{:016x}", h);
}

int run_command(std::string_view command, const RunConfig& config, std::ostream& log,
                std::ostream& err) {
  try {
    if (command == "octagon") {
      return cmd_octagon(config, log);
    }
    if (command == "spectrum" || command == "tau" || command == "falpha") {
      return cmd_walk_family(command, config, log);
    }
    if (command == "markov") {
      return cmd_markov(config, log);
    }
    if (command == "compare") {
      return cmd_compare(config, log);
    }
    if (command == "potential") {
      return cmd_potential(config, log);
    }
    err << "unknown command '" << command << "'\n";
    return kExitFailure;
  } catch (const InadmissibleModule& e) {
    err << "error: " << e.what() << '\n';
    return kExitBadModule;
  } catch (const GenerationBudgetExceeded& e) {
    err << "error: " << e.what() << " (raise it with --max-n or " << kMaxNEnv << ")\n";
    return kExitBudget;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

int run_cli(int argc, const char* const* argv, std::ostream& log, std::ostream& err) {
  CLI::App app{"Directed walks on genus-two hyperbolic octagonal lattices"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);
  app.fallthrough();

  const std::map<std::string, std::string> commands = {
      {"octagon", "Build the fundamental octagon and check its group relation"},
      {"spectrum", "Enumerate walk lengths; write spectrum and histogram"},
      {"tau", "Mass exponents tau(q) of the length ensemble"},
      {"falpha", "Singularity spectrum f(alpha) and information entropy"},
      {"markov", "Markov-chain and Gaussian approximations of Z_N(q)"},
      {"compare", "Compare exact, chain and Gaussian tau(q)"},
      {"potential", "Liouville potential and Euclidean-time checks"},
  };
  for (const auto& [name, help] : commands) {
    app.add_subcommand(name, help);
  }

  double a = 0.0;
  std::string alpha;
  int n = 0;
  double q_min = 0.0;
  double q_max = 0.0;
  double dq = 0.0;
  int bins = 0;
  unsigned workers = 0;
  std::string out_dir;
  std::string format;
  std::string config_path;
  double amp = 0.0;
  double offset = 0.0;
  double radius = 0.0;
  std::vector<double> markov_q;
  int max_n = 0;

  auto* o_a = app.add_option("--a", a, "Vertex radius a");
  auto* o_alpha = app.add_option("--alpha", alpha, "Vertex angle alpha (radians or pi/k)");
  auto* o_n = app.add_option("--n", n, "Walk depth N")->check(CLI::PositiveNumber);
  auto* o_qmin = app.add_option("--qmin", q_min, "Lower end of the q grid");
  auto* o_qmax = app.add_option("--qmax", q_max, "Upper end of the q grid");
  auto* o_dq = app.add_option("--dq", dq, "q grid step")->check(CLI::PositiveNumber);
  auto* o_bins = app.add_option("--bins", bins, "Histogram bins")->check(CLI::Range(10, 100000));
  auto* o_workers = app.add_option("--workers", workers, "Enumeration threads")->check(CLI::PositiveNumber);
  auto* o_out = app.add_option("--out", out_dir, "Output directory");
  auto* o_format =
      app.add_option("--format", format, "Data file format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--config", config_path, "JSON config file; flags override it")
      ->check(CLI::ExistingFile);
  auto* o_amp = app.add_option("--A", amp, "Liouville constant A");
  auto* o_offset = app.add_option("--C", offset, "Liouville constant C");
  auto* o_radius = app.add_option("--R", radius, "Geodesic radius for the s -> t table")
                       ->check(CLI::PositiveNumber);
  auto* o_mq = app.add_option("--q", markov_q, "q values reported by markov");
  auto* o_max_n = app.add_option("--max-n", max_n, "Enumeration guard (overrides OCTWALK_MAX_N)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream out_stream;
    std::ostringstream err_stream;
    const int code = app.exit(e, out_stream, err_stream);
    log << out_stream.str();
    err << err_stream.str();
    return code == 0 ? kExitOk : kExitFailure;
  }

  RunConfig config;
  try {
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      config = config_from_json(json::parse(in));
    }
    if (const char* env = std::getenv(kMaxNEnv)) {
      const auto value = parse_number(env);
      if (!value || *value < 1) {
        throw Error(fmt::format("{} must be a positive integer", kMaxNEnv));
      }
      config.max_generations = static_cast<int>(*value);
    }
    if (o_a->count()) config.a = a;
    if (o_alpha->count()) config.alpha = parse_angle(alpha);
    if (o_n->count()) config.n = n;
    if (o_qmin->count()) config.q_min = q_min;
    if (o_qmax->count()) config.q_max = q_max;
    if (o_dq->count()) config.dq = dq;
    if (o_bins->count()) config.bins = bins;
    if (o_workers->count()) config.workers = workers;
    if (o_out->count()) config.out_dir = out_dir;
    if (o_format->count()) config.format = parse_format(format);
    if (o_amp->count()) config.potential_amp = amp;
    if (o_offset->count()) config.potential_offset = offset;
    if (o_radius->count()) config.arc_radius = radius;
    if (o_mq->count()) config.markov_q = markov_q;
    if (o_max_n->count()) config.max_generations = max_n;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }

  const auto* sub = app.get_subcommands().front();
  return run_command(sub->get_name(), config, log, err);
}

} // namespace octwalk::cli
