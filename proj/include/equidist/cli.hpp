#pragma once

// Declarative run layer behind the equidist command-line tool: configuration
// parsing, the per-command sweeps, CSV/JSON report assembly and atomic file
// output. Everything here is deterministic for a fixed configuration except
// the optional wall_time_ns column.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "discrepancy.hpp"
#include "energy.hpp"
#include "errors.hpp"
#include "manifold.hpp"
#include "paircorr.hpp"
#include "point_set.hpp"
#include "sequences.hpp"
#include "summation.hpp"

namespace equidist::cli {

using json = nlohmann::json;

inline constexpr const char* csv_schema = "equidist-csv v1";
inline constexpr const char* csv_header = "kind,N,t,method,value,excess,error_bound,wall_time_ns";

// Absolute tolerance for E_1 - 1, far below any excess that is representable
// next to 1, so the spectral sum keeps its full relative precision.
inline constexpr double excess_resolution_tol = 1e-300;

enum class Command { energy, profile, discrepancy, paircorr, bound, report };

inline const char* command_name(Command c) {
  switch (c) {
  case Command::energy:
    return "energy";
  case Command::profile:
    return "profile";
  case Command::discrepancy:
    return "discrepancy";
  case Command::paircorr:
    return "paircorr";
  case Command::bound:
    return "bound";
  case Command::report:
    return "report";
  }
  return "unknown";
}

// Time schedule: an explicit list, a constant, f(N)/N^2 with f = ln or
// sqrt(ln), or N^(-2 alpha).
struct TSchedule {
  enum class Rule { values, constant, f_over_n2, n_pow };
  Rule rule = Rule::f_over_n2;
  std::vector<double> values;
  double c = 0.0;
  std::string f = "log";
  double alpha = 0.5;

  std::vector<double> evaluate(std::size_t n) const {
    const double nd = static_cast<double>(n);
    std::vector<double> out;
    switch (rule) {
    case Rule::values:
      out = values;
      break;
    case Rule::constant:
      out = {c};
      break;
    case Rule::f_over_n2: {
      const double fn = f == "log" ? std::log(nd) : std::sqrt(std::log(nd));
      out = {fn / (nd * nd)};
      break;
    }
    case Rule::n_pow:
      out = {std::pow(nd, -2.0 * alpha)};
      break;
    }
    for (double t : out)
      if (!(t > 0.0) || !std::isfinite(t))
        throw ConfigError("t_schedule evaluates to a non-positive time at N = " + std::to_string(n));
    return out;
  }

  json to_json() const {
    switch (rule) {
    case Rule::values:
      return {{"values", values}};
    case Rule::constant:
      return {{"rule", "constant"}, {"c", c}};
    case Rule::f_over_n2:
      return {{"rule", "f_over_n2"}, {"f", f}};
    case Rule::n_pow:
      return {{"rule", "n_pow"}, {"alpha", alpha}};
    }
    return {};
  }
};

struct PcSettings {
  std::vector<double> s_grid{1, 2, 3, 4, 5, 6, 7, 8};
  double alpha = 1.0;
  bool include_diagonal = false;
  double tolerance = PairCorrConfig{}.tolerance;
  double weak_alpha = 0.5;
};

struct BoundSettings {
  std::optional<double> c;  // empty: calibrate
  std::vector<std::size_t> calibration_n{64, 256, 1024};
  std::uint64_t calibration_seed = 20240601;
};

struct RunConfig {
  Command command = Command::energy;
  std::optional<GeneratorSpec> generator;
  std::string input_file;
  TSchedule t_schedule;
  std::vector<std::size_t> n_schedule;
  std::string output_dir = ".";
  std::string method = "auto";
  double energy_tol = default_energy_tol;
  std::size_t frequency_cap = default_frequency_cap;
  PcSettings pc;
  BoundSettings bound;
  double e1_threshold = 1e-3;
  double gaussian_tolerance = 0.15;
  std::size_t arc_max_n = 16384;  // larger sets report the star discrepancy bound instead
  std::optional<bool> record_timing;
  unsigned threads = 1;

  bool timing() const { return record_timing.value_or(command != Command::report); }
};

// ---- config parsing ------------------------------------------------------

namespace detail {

inline void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [k, v] : j.items())
    if (!allowed.count(k))
      throw ConfigError(where + ": unknown key '" + k + "'");
}

inline GeneratorSpec parse_generator(const json& g) {
  reject_unknown(g, {"kind", "alpha", "base", "seed", "cluster", "dim"}, "generator");
  GeneratorSpec s;
  s.kind = kind_from_name(g.at("kind").get<std::string>());
  if (g.contains("alpha"))
    s.alpha = g["alpha"].get<double>();
  if (g.contains("base"))
    s.base = g["base"].get<unsigned>();
  if (g.contains("seed"))
    s.seed = g["seed"].get<std::uint64_t>();
  if (g.contains("cluster")) {
    const auto c = g["cluster"].get<std::vector<double>>();
    if (c.size() != 2)
      throw ConfigError("generator.cluster must be [lo, hi]");
    s.cluster_lo = c[0];
    s.cluster_hi = c[1];
  }
  if (g.contains("dim"))
    s.dim = g["dim"].get<std::size_t>();
  s.validate();
  return s;
}

inline TSchedule parse_schedule(const json& j) {
  TSchedule s;
  if (j.is_array()) {
    s.rule = TSchedule::Rule::values;
    s.values = j.get<std::vector<double>>();
  } else if (j.contains("values")) {
    reject_unknown(j, {"values"}, "t_schedule");
    s.rule = TSchedule::Rule::values;
    s.values = j["values"].get<std::vector<double>>();
  } else {
    const std::string rule = j.at("rule").get<std::string>();
    if (rule == "constant") {
      reject_unknown(j, {"rule", "c"}, "t_schedule");
      s.rule = TSchedule::Rule::constant;
      s.c = j.at("c").get<double>();
    } else if (rule == "f_over_n2") {
      reject_unknown(j, {"rule", "f"}, "t_schedule");
      s.rule = TSchedule::Rule::f_over_n2;
      s.f = j.value("f", std::string("log"));
      if (s.f != "log" && s.f != "sqrt_log")
        throw ConfigError("t_schedule.f must be 'log' or 'sqrt_log'");
    } else if (rule == "n_pow") {
      reject_unknown(j, {"rule", "alpha"}, "t_schedule");
      s.rule = TSchedule::Rule::n_pow;
      s.alpha = j.at("alpha").get<double>();
      if (!(s.alpha > 0.0))
        throw ConfigError("t_schedule.alpha must be positive");
    } else {
      throw ConfigError("unknown t_schedule rule '" + rule + "'");
    }
  }
  if (s.rule == TSchedule::Rule::values && s.values.empty())
    throw ConfigError("t_schedule: empty list");
  for (double t : s.values)
    if (!(t > 0.0) || !std::isfinite(t))
      throw ConfigError("t_schedule: times must be positive");
  return s;
}

} // namespace detail

/// Parses and validates a run configuration. Any schema violation raises
/// ConfigError.
inline RunConfig parse_config(const json& j) {
  try {
    if (!j.is_object())
      throw ConfigError("config must be a JSON object");
    detail::reject_unknown(j,
                           {"command", "input", "t_schedule", "n_schedule", "output", "method", "tolerance",
                            "paircorr", "bound", "thresholds", "record_timing", "threads"},
                           "config");
    RunConfig c;
    const std::string cmd = j.at("command").get<std::string>();
    bool found = false;
    for (int i = 0; i <= static_cast<int>(Command::report); ++i) {
      if (cmd == command_name(static_cast<Command>(i))) {
        c.command = static_cast<Command>(i);
        found = true;
      }
    }
    if (!found)
      throw ConfigError("unknown command '" + cmd + "'");

    const json& in = j.at("input");
    detail::reject_unknown(in, {"generator", "file"}, "input");
    if (in.contains("generator") == in.contains("file"))
      throw ConfigError("input needs exactly one of 'generator' or 'file'");
    if (in.contains("generator"))
      c.generator = detail::parse_generator(in["generator"]);
    else
      c.input_file = in["file"].get<std::string>();

    if (j.contains("n_schedule"))
      c.n_schedule = j["n_schedule"].get<std::vector<std::size_t>>();
    if (c.generator && c.n_schedule.empty())
      throw ConfigError("n_schedule must be nonempty");
    for (std::size_t n : c.n_schedule)
      if (n < 1)
        throw ConfigError("n_schedule entries must be >= 1");

    if (j.contains("t_schedule"))
      c.t_schedule = detail::parse_schedule(j["t_schedule"]);
    else if (c.command == Command::energy || c.command == Command::profile)
      throw ConfigError("t_schedule is required for this command");
    if (c.command == Command::profile) {
      if (c.t_schedule.rule != TSchedule::Rule::values)
        throw ConfigError("profile needs an explicit t list");
      for (std::size_t i = 1; i < c.t_schedule.values.size(); ++i)
        if (!(c.t_schedule.values[i] > c.t_schedule.values[i - 1]))
          throw ConfigError("profile: t list must be strictly ascending");
    }

    if (j.contains("output"))
      c.output_dir = j["output"].get<std::string>();
    if (j.contains("method")) {
      c.method = j["method"].get<std::string>();
      static const std::set<std::string> methods{"auto", "direct", "fast", "spectral", "gaussian"};
      if (!methods.count(c.method))
        throw ConfigError("unknown method '" + c.method + "'");
    }
    if (j.contains("tolerance")) {
      const json& t = j["tolerance"];
      detail::reject_unknown(t, {"energy", "frequency_cap"}, "tolerance");
      c.energy_tol = t.value("energy", c.energy_tol);
      c.frequency_cap = t.value("frequency_cap", c.frequency_cap);
      if (!(c.energy_tol > 0.0 && c.energy_tol < 1.0))
        throw ConfigError("tolerance.energy must lie in (0, 1)");
    }
    if (j.contains("paircorr")) {
      const json& p = j["paircorr"];
      detail::reject_unknown(p, {"s_grid", "alpha", "include_diagonal", "tolerance", "weak_alpha"}, "paircorr");
      if (p.contains("s_grid"))
        c.pc.s_grid = p["s_grid"].get<std::vector<double>>();
      c.pc.alpha = p.value("alpha", c.pc.alpha);
      c.pc.include_diagonal = p.value("include_diagonal", c.pc.include_diagonal);
      c.pc.tolerance = p.value("tolerance", c.pc.tolerance);
      c.pc.weak_alpha = p.value("weak_alpha", c.pc.weak_alpha);
      if (c.pc.s_grid.empty())
        throw ConfigError("paircorr.s_grid must be nonempty");
      for (std::size_t i = 0; i < c.pc.s_grid.size(); ++i)
        if (!(c.pc.s_grid[i] > 0.0) || (i > 0 && !(c.pc.s_grid[i] > c.pc.s_grid[i - 1])))
          throw ConfigError("paircorr.s_grid must be positive and strictly ascending");
      for (double a : {c.pc.alpha, c.pc.weak_alpha})
        if (!(a > 0.0 && a <= 1.0))
          throw ConfigError("paircorr alpha values must lie in (0, 1]");
    }
    if (j.contains("bound")) {
      const json& b = j["bound"];
      detail::reject_unknown(b, {"c", "calibration_n", "calibration_seed"}, "bound");
      if (b.contains("c")) {
        if (b["c"].is_string()) {
          if (b["c"].get<std::string>() != "calibrate")
            throw ConfigError("bound.c must be a number or \"calibrate\"");
        } else {
          c.bound.c = b["c"].get<double>();
          if (!(*c.bound.c > 0.0))
            throw ConfigError("bound.c must be positive");
        }
      }
      if (b.contains("calibration_n"))
        c.bound.calibration_n = b["calibration_n"].get<std::vector<std::size_t>>();
      c.bound.calibration_seed = b.value("calibration_seed", c.bound.calibration_seed);
      if (c.bound.calibration_n.empty())
        throw ConfigError("bound.calibration_n must be nonempty");
      for (std::size_t n : c.bound.calibration_n)
        if (n < 2)
          throw ConfigError("bound.calibration_n entries must be >= 2");
    }
    if (j.contains("thresholds")) {
      const json& t = j["thresholds"];
      detail::reject_unknown(t, {"e1", "gaussian", "arc_max_n"}, "thresholds");
      c.e1_threshold = t.value("e1", c.e1_threshold);
      c.gaussian_tolerance = t.value("gaussian", c.gaussian_tolerance);
      c.arc_max_n = t.value("arc_max_n", c.arc_max_n);
    }
    if (j.contains("record_timing"))
      c.record_timing = j["record_timing"].get<bool>();
    if (j.contains("threads"))
      c.threads = j["threads"].get<unsigned>();
    return c;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f)
    throw ConfigError("cannot open config '" + path + "'");
  json j;
  try {
    j = json::parse(f);
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return parse_config(j);
}

// ---- result rows ---------------------------------------------------------

struct CsvRow {
  std::string kind;
  std::size_t n = 0;
  double t = 0.0;  // the time, or s for pair-correlation rows
  std::string method;
  double value = 0.0;
  double excess = 0.0;
  double error_bound = 0.0;
  std::int64_t wall_time_ns = 0;
};

struct RunResult {
  std::vector<CsvRow> rows;
  json summary;
};

inline std::string format_csv(const std::vector<CsvRow>& rows) {
  std::ostringstream os;
  os << csv_header << '\n';
  for (const CsvRow& r : rows) {
    os << r.kind << ',' << r.n << ',' << equidist::detail::fmt17(r.t) << ',' << r.method << ','
       << equidist::detail::fmt17(r.value) << ',' << equidist::detail::fmt17(r.excess) << ','
       << equidist::detail::fmt17(r.error_bound) << ',' << r.wall_time_ns << '\n';
  }
  return os.str();
}

inline const char* verdict(bool ok) { return ok ? "pass" : "fail"; }

namespace detail {

class Stopwatch {
public:
  explicit Stopwatch(bool on) : on_(on), start_(std::chrono::steady_clock::now()) {}
  std::int64_t ns() const {
    if (!on_)
      return 0;
    return std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - start_)
        .count();
  }

private:
  bool on_;
  std::chrono::steady_clock::time_point start_;
};

// The configured input resolved to concrete points for each N.
class Input {
public:
  explicit Input(const RunConfig& c) : cfg_(c) {
    if (!c.generator) {
      data_ = read_points_file(c.input_file);
      if (cfg_.n_schedule.empty())
        cfg_.n_schedule = {file_size()};
      for (std::size_t n : cfg_.n_schedule)
        if (n > file_size())
          throw InputError("n_schedule asks for " + std::to_string(n) + " points, file has " +
                           std::to_string(file_size()));
    }
  }

  const std::vector<std::size_t>& n_schedule() const { return cfg_.n_schedule; }

  SpaceTag space() const {
    if (cfg_.generator)
      return cfg_.generator->on_sphere() ? SpaceTag::sphere2
             : cfg_.generator->dim > 1  ? SpaceTag::torus
                                        : SpaceTag::circle;
    if (std::holds_alternative<PointSet>(data_))
      return SpaceTag::circle;
    return std::holds_alternative<std::vector<SpherePoint>>(data_) ? SpaceTag::sphere2 : SpaceTag::torus;
  }

  std::string describe() const {
    return cfg_.generator ? cfg_.generator->describe() : "file " + cfg_.input_file;
  }

  PointSet circle(std::size_t n) const {
    if (space() != SpaceTag::circle)
      throw ConfigError(std::string(command_name(cfg_.command)) + " needs circle points");
    if (cfg_.generator)
      return generate(*cfg_.generator, n);
    return std::get<PointSet>(data_).prefix(n);
  }

  std::vector<TorusPoint> torus(std::size_t n) const {
    if (cfg_.generator)
      return generate_torus(*cfg_.generator, n);
    const auto& v = std::get<std::vector<TorusPoint>>(data_);
    return {v.begin(), v.begin() + static_cast<std::ptrdiff_t>(n)};
  }

  std::vector<SpherePoint> sphere(std::size_t n) const {
    if (cfg_.generator)
      return generate_sphere(*cfg_.generator, n);
    const auto& v = std::get<std::vector<SpherePoint>>(data_);
    return {v.begin(), v.begin() + static_cast<std::ptrdiff_t>(n)};
  }

private:
  std::size_t file_size() const {
    return std::visit([](const auto& d) { return d.size(); }, data_);
  }

  RunConfig cfg_;
  PointData data_;
};

inline json report_json(const EnergyReport& r) {
  return {{"N", r.n_points},        {"t", r.t},       {"energy", r.energy},
          {"excess", r.excess},     {"method", method_name(r.method)},
          {"error_bound", r.error_bound}};
}

inline CsvRow energy_row(const std::string& kind, const EnergyReport& r, std::int64_t ns) {
  return {kind, r.n_points, r.t, method_name(r.method), r.energy, r.excess, r.error_bound, ns};
}

inline EnergyReport circle_energy(const RunConfig& c, const PointSet& p, double t, Exec exec) {
  if (c.method == "direct")
    return theta_energy(p, t, c.energy_tol, exec);
  if (c.method == "fast")
    return theta_energy_fast(p, t, c.energy_tol, exec);
  if (c.method == "spectral")
    return theta_energy_spectral(p, t, c.energy_tol, c.frequency_cap, exec);
  return theta_energy_auto(p, t, c.energy_tol, exec);
}

inline EnergyReport any_energy(const RunConfig& c, const Input& in, std::size_t n, double t, Exec exec) {
  switch (in.space()) {
  case SpaceTag::circle:
    return circle_energy(c, in.circle(n), t, exec);
  case SpaceTag::torus: {
    const auto pts = in.torus(n);
    return heat_energy(FlatTorus{pts.front().size()}, pts, t, c.energy_tol, exec);
  }
  case SpaceTag::sphere2:
    return heat_energy(Sphere2{}, in.sphere(n), t, c.energy_tol, exec);
  }
  throw ConfigError("unsupported space");
}

inline double inv_volume(SpaceTag s) { return s == SpaceTag::sphere2 ? 1.0 / (4.0 * pi) : 1.0; }

inline json header(const RunConfig& c, const Input& in) {
  return {{"command", command_name(c.command)},
          {"input", in.describe()},
          {"rng", rng_version},
          {"csv_schema", csv_schema},
          {"n_schedule", in.n_schedule()}};
}

// Offset of F_N(s) coming from the N identical pairs, N^{alpha - 1}.
inline double diagonal_offset(std::size_t n, double alpha, bool include_diagonal) {
  return include_diagonal ? std::pow(static_cast<double>(n), alpha - 1.0) : 0.0;
}

inline json curve_json(const PairCorrCurve& curve, double offset, double tol) {
  const double dev = poisson_deviation(curve, offset);
  return {{"alpha", curve.alpha},
          {"s", curve.s_grid},
          {"values", curve.values},
          {"include_diagonal", curve.include_diagonal},
          {"max_deviation", dev},
          {"tolerance", tol},
          {"verdict", verdict(dev <= tol)}};
}

inline void curve_rows(std::vector<CsvRow>& rows, const std::string& kind, const PairCorrCurve& curve,
                       std::size_t n, double offset, std::int64_t ns) {
  for (std::size_t k = 0; k < curve.values.size(); ++k) {
    const double s = curve.s_grid[k];
    rows.push_back({kind, n, s, "count", curve.values[k], curve.values[k] - (offset + 2.0 * s), 0.0, ns});
  }
}

// Calibration families: lattice, golden Kronecker, a cluster in [0, 0.1)
// and i.i.d. uniform at every calibration N.
inline std::vector<PointSet> calibration_sets(const BoundSettings& b) {
  std::vector<PointSet> out;
  for (std::size_t n : b.calibration_n) {
    GeneratorSpec s;
    s.kind = GeneratorKind::lattice;
    out.push_back(generate(s, n));
    s.kind = GeneratorKind::kronecker;
    out.push_back(generate(s, n));
    s.kind = GeneratorKind::clustered;
    s.seed = b.calibration_seed;
    out.push_back(generate(s, n));
    s.kind = GeneratorKind::uniform_random;
    s.seed = b.calibration_seed + 1;
    out.push_back(generate(s, n));
  }
  return out;
}

inline std::pair<double, json> resolve_c(const RunConfig& c, Exec exec) {
  if (c.bound.c)
    return {*c.bound.c, {{"c", *c.bound.c}, {"calibrated", false}}};
  const double cal = calibrate_c(calibration_sets(c.bound), exec);
  return {cal,
          {{"c", cal},
           {"calibrated", true},
           {"calibration_n", c.bound.calibration_n},
           {"calibration_seed", c.bound.calibration_seed},
           {"families", {"lattice", "kronecker", "clustered", "uniform_random"}}}};
}

inline json bound_json(const BoundCheck& b) {
  return {{"d_n", b.d_n},   {"c", b.c},     {"t_star", b.t_star},
          {"energy", b.energy}, {"rhs", b.rhs}, {"holds", b.holds}};
}

inline json discrepancy_json(const DiscrepancyResult& d) {
  return {{"d_n", d.d_n},
          {"method", "arc_exact"},
          {"witness", {{"left", d.witness.left}, {"right", d.witness.right}, {"closed", d.witness.closed}}}};
}

} // namespace detail

/// The corollary diagnostics for one circle sequence family, per N:
/// E_1 - 1 (spectrally resolved), the Gaussian energy at the scheduled t,
/// the Poissonian and weak pair-correlation curves, the discrepancy and the
/// discrepancy-energy inequality. Verdicts are finite-N diagnostics against
/// the configured thresholds.
inline json report_corollaries(const RunConfig& c, std::vector<CsvRow>* rows = nullptr) {
  const detail::Input in(c);
  if (in.space() != SpaceTag::circle)
    throw ConfigError("report needs circle points");
  const Exec exec{c.threads};
  const bool timing = c.timing();
  std::vector<CsvRow> local;
  std::vector<CsvRow>& out_rows = rows ? *rows : local;

  json doc = detail::header(c, in);
  doc["t_schedule"] = c.t_schedule.to_json();
  doc["thresholds"] = {{"e1", c.e1_threshold},
                       {"gaussian", c.gaussian_tolerance},
                       {"paircorr", c.pc.tolerance},
                       {"weak_alpha", c.pc.weak_alpha},
                       {"arc_max_n", c.arc_max_n}};
  const auto [cval, cinfo] = detail::resolve_c(c, exec);
  doc["bound_constant"] = cinfo;

  json per_n = json::array();
  std::vector<double> e1_excess;
  std::vector<double> g_dev;
  bool last_pc = false, last_weak = false, all_bound = true, any_bound = false;
  for (std::size_t n : in.n_schedule()) {
    const PointSet p = in.circle(n);
    json entry;
    entry["N"] = n;

    {
      const detail::Stopwatch sw(timing);
      const EnergyReport e1 = theta_energy_auto(p, 1.0, c.energy_tol, exec);
      const double ex = theta_excess_spectral(p, 1.0, excess_resolution_tol, c.frequency_cap, exec);
      e1_excess.push_back(ex);
      out_rows.push_back({"e1", n, 1.0, method_name(e1.method), e1.energy, ex, e1.error_bound, sw.ns()});
      entry["e1"] = {{"energy", e1.energy}, {"excess", ex}, {"error_bound", e1.error_bound}};
    }

    {
      json g = json::array();
      for (double t : c.t_schedule.evaluate(n)) {
        const detail::Stopwatch sw(timing);
        const double v = gaussian_energy(p, t, c.energy_tol, exec);
        const double dev = v - std::sqrt(pi);
        const double diag = 1.0 / (static_cast<double>(n) * std::sqrt(t));
        out_rows.push_back({"gaussian", n, t, "gaussian", v, dev, c.energy_tol, sw.ns()});
        g.push_back({{"t", t}, {"value", v}, {"deviation", dev}, {"diagonal", diag},
                     {"diagonal_weight", diagonal_weight(n, t)},
                     {"verdict", verdict(std::abs(dev) <= c.gaussian_tolerance)}});
        g_dev.push_back(std::abs(dev));
      }
      entry["gaussian"] = g;
    }

    {
      const detail::Stopwatch sw(timing);
      const PairCorrCurve pc = pc_curve(p, c.pc.s_grid, 1.0, false);
      const PairCorrCurve weak = pc_curve(p, c.pc.s_grid, c.pc.weak_alpha, false);
      const std::int64_t ns = sw.ns();
      detail::curve_rows(out_rows, "paircorr", pc, n, 0.0, ns);
      detail::curve_rows(out_rows, "paircorr_weak", weak, n, 0.0, ns);
      entry["paircorr"] = detail::curve_json(pc, 0.0, c.pc.tolerance);
      entry["weak_paircorr"] = detail::curve_json(weak, 0.0, c.pc.tolerance);
      last_pc = poisson_deviation(pc) <= c.pc.tolerance;
      last_weak = poisson_deviation(weak) <= c.pc.tolerance;
    }

    {
      const detail::Stopwatch sw(timing);
      double d_n;
      if (n <= c.arc_max_n) {
        const DiscrepancyResult d = arc_discrepancy(p);
        d_n = d.d_n;
        entry["discrepancy"] = detail::discrepancy_json(d);
        out_rows.push_back({"discrepancy", n, 0.0, "arc_exact", d_n, d_n - 1.0 / static_cast<double>(n), 0.0,
                            sw.ns()});
      } else {
        // every arc is a difference of two anchored intervals
        d_n = std::min(1.0, 2.0 * star_discrepancy(p));
        entry["discrepancy"] = {{"d_n", d_n}, {"method", "star_bound"}};
        out_rows.push_back({"discrepancy", n, 0.0, "star_bound", d_n, d_n - 1.0 / static_cast<double>(n), 0.0,
                            sw.ns()});
      }
      if (d_n > 0.0 && d_n < 1.0) {
        const detail::Stopwatch sb(timing);
        const BoundCheck b = bound_check_with(p, d_n, cval, exec);
        out_rows.push_back({"bound", n, b.t_star, "auto", b.rhs, b.energy - 1.0, c.energy_tol, sb.ns()});
        entry["bound"] = detail::bound_json(b);
        all_bound = all_bound && b.holds;
        any_bound = true;
      } else {
        entry["bound"] = {{"applicable", false}};
      }
    }
    per_n.push_back(entry);
  }
  doc["per_n"] = per_n;

  bool e1_decreasing = true;
  for (std::size_t i = 1; i < e1_excess.size(); ++i)
    e1_decreasing = e1_decreasing && e1_excess[i] <= e1_excess[i - 1];
  bool g_shrinking = true;
  for (std::size_t i = 1; i < g_dev.size(); ++i)
    g_shrinking = g_shrinking && g_dev[i] < g_dev[i - 1];
  doc["verdicts"] = {
      {"e1_nonincreasing", verdict(e1_decreasing)},
      {"e1_below_threshold", verdict(!e1_excess.empty() && e1_excess.back() < c.e1_threshold)},
      {"gaussian_within_tolerance", verdict(!g_dev.empty() && g_dev.back() <= c.gaussian_tolerance)},
      {"gaussian_deviation_shrinking", verdict(g_shrinking)},
      {"poissonian_paircorr", verdict(last_pc)},
      {"weak_paircorr", verdict(last_weak)},
      {"discrepancy_bound", any_bound ? verdict(all_bound) : "n/a"},
  };
  return doc;
}

/// Runs one configured command and returns its rows and summary document.
inline RunResult execute(const RunConfig& c) {
  RunResult res;
  if (c.command == Command::report) {
    res.summary = report_corollaries(c, &res.rows);
    return res;
  }
  const detail::Input in(c);
  const Exec exec{c.threads};
  const bool timing = c.timing();
  json doc = detail::header(c, in);
  json results = json::array();
  bool ok = true;

  switch (c.command) {
  case Command::energy:
    doc["t_schedule"] = c.t_schedule.to_json();
    doc["method"] = c.method;
    for (std::size_t n : in.n_schedule()) {
      for (double t : c.t_schedule.evaluate(n)) {
        const detail::Stopwatch sw(timing);
        if (c.method == "gaussian") {
          const PointSet p = in.circle(n);
          const double v = gaussian_energy(p, t, c.energy_tol, exec);
          res.rows.push_back({"gaussian", n, t, "gaussian", v, v - std::sqrt(pi), c.energy_tol, sw.ns()});
          results.push_back({{"N", n}, {"t", t}, {"value", v}, {"deviation", v - std::sqrt(pi)}});
          continue;
        }
        if (in.space() != SpaceTag::circle && c.method != "auto" && c.method != "direct")
          throw ConfigError("only the direct method is available off the circle");
        const EnergyReport r = detail::any_energy(c, in, n, t, exec);
        res.rows.push_back(detail::energy_row("energy", r, sw.ns()));
        const bool floor_ok = r.energy >= detail::inv_volume(in.space()) - r.error_bound - 1e-12;
        ok = ok && floor_ok;
        json rj = detail::report_json(r);
        rj["floor_ok"] = floor_ok;
        results.push_back(rj);
      }
    }
    doc["verdicts"] = {{"floor", verdict(ok)}};
    break;

  case Command::profile:
    doc["t_schedule"] = c.t_schedule.to_json();
    for (std::size_t n : in.n_schedule()) {
      json prof = json::array();
      double prev = 0.0;
      bool first = true;
      for (double t : c.t_schedule.values) {
        const detail::Stopwatch sw(timing);
        const EnergyReport r = detail::any_energy(c, in, n, t, exec);
        res.rows.push_back(detail::energy_row("profile", r, sw.ns()));
        if (!first && r.energy > prev + 2.0 * c.energy_tol)
          ok = false;
        ok = ok && r.energy >= detail::inv_volume(in.space()) - r.error_bound - 1e-12;
        prev = r.energy;
        first = false;
        prof.push_back(detail::report_json(r));
      }
      results.push_back({{"N", n}, {"profile", prof}});
    }
    doc["verdicts"] = {{"monotone_and_floor", verdict(ok)}};
    break;

  case Command::discrepancy:
    for (std::size_t n : in.n_schedule()) {
      const PointSet p = in.circle(n);
      const detail::Stopwatch sw(timing);
      const DiscrepancyResult d = arc_discrepancy(p);
      const double star = star_discrepancy(p);
      res.rows.push_back({"discrepancy", n, 0.0, "arc_exact", d.d_n, d.d_n - 1.0 / static_cast<double>(n), 0.0,
                          sw.ns()});
      json dj = detail::discrepancy_json(d);
      dj["N"] = n;
      dj["star"] = star;
      ok = ok && d.d_n >= 1.0 / static_cast<double>(n) - 1e-15;
      results.push_back(dj);
    }
    doc["verdicts"] = {{"floor", verdict(ok)}};
    break;

  case Command::paircorr:
    for (std::size_t n : in.n_schedule()) {
      const PointSet p = in.circle(n);
      const detail::Stopwatch sw(timing);
      const PairCorrCurve curve = pc_curve(p, c.pc.s_grid, c.pc.alpha, c.pc.include_diagonal);
      const double off = detail::diagonal_offset(n, c.pc.alpha, c.pc.include_diagonal);
      detail::curve_rows(res.rows, "paircorr", curve, n, off, sw.ns());
      json cj = detail::curve_json(curve, off, c.pc.tolerance);
      cj["N"] = n;
      cj["diagonal_offset"] = off;
      ok = poisson_deviation(curve, off) <= c.pc.tolerance;  // last N decides
      results.push_back(cj);
    }
    doc["verdicts"] = {{"paircorr", verdict(ok)}};
    break;

  case Command::bound: {
    const auto [cval, cinfo] = detail::resolve_c(c, exec);
    doc["bound_constant"] = cinfo;
    for (std::size_t n : in.n_schedule()) {
      const PointSet p = in.circle(n);
      const detail::Stopwatch sw(timing);
      const BoundCheck b = bound_check(p, cval, exec);
      res.rows.push_back({"bound", n, b.t_star, "auto", b.rhs, b.energy - 1.0, c.energy_tol, sw.ns()});
      json bj = detail::bound_json(b);
      bj["N"] = n;
      ok = ok && b.holds;
      results.push_back(bj);
    }
    doc["holds"] = ok;
    doc["verdicts"] = {{"bound", verdict(ok)}};
    break;
  }
  case Command::report:
    break;
  }
  doc["results"] = results;
  res.summary = doc;
  return res;
}

/// Writes content to path through a temporary file in the same directory
/// and a rename, so readers never see a partial file.
inline void write_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f)
      throw InputError("cannot write '" + tmp.string() + "'");
    f << content;
    f.flush();
    if (!f)
      throw InputError("write failed for '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, path);
}

inline std::string summary_name(Command c) { return c == Command::report ? "report.json" : "summary.json"; }

/// Writes results.csv and the summary document into dir.
inline void write_outputs(const RunConfig& c, const RunResult& r, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_atomic(dir / "results.csv", format_csv(r.rows));
  write_atomic(dir / summary_name(c.command), r.summary.dump(2) + "\n");
}

/// Process exit status for an escaped exception.
inline int exit_code(const std::exception& e) {
  if (dynamic_cast<const InputError*>(&e))
    return 2;
  if (dynamic_cast<const ConfigError*>(&e))
    return 3;
  if (dynamic_cast<const InfeasibleError*>(&e))
    return 4;
  if (dynamic_cast<const DomainError*>(&e))
    return 5;
  if (dynamic_cast<const DataCorruption*>(&e))
    return 6;
  if (dynamic_cast<const std::filesystem::filesystem_error*>(&e))
    return 2;
  return 1;
}

} // namespace equidist::cli
