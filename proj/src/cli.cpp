#include "q1d/cli.hpp"

#include "q1d/errors.hpp"
#include "q1d/gc_analysis.hpp"
#include "q1d/io.hpp"
#include "q1d/mc_verify.hpp"
#include "q1d/ratefn.hpp"
#include "q1d/renewal_mgf.hpp"
#include "q1d/simulate.hpp"
#include "q1d/spectral.hpp"

#include "CLI11.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>

namespace q1d {
namespace {

namespace fs = std::filesystem;
using io::json;

struct Options {
  std::string input;
  std::string out;
  std::string out_dir;
  std::string kind = "I";
  std::string route = "renewal";
  std::string grid;
  double t = 0.0;
  std::size_t n = 0;
  double bins = 0.0;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  std::int64_t level = 0;
  double t_cap = 0.0;
  double window = 0.0;
  std::size_t grid_size = 200;
  double tol = 1e-8;
  std::size_t samples = 0;
  double significance = 0.01;
  bool raw = false;
  bool allow_one_sided = false;
};

std::vector<double> parse_grid(const std::string& spec) {
  const auto c1 = spec.find(':');
  const auto c2 = c1 == std::string::npos ? std::string::npos : spec.find(':', c1 + 1);
  if (c2 == std::string::npos) throw Error(ErrorCode::invalid_input, "grid must look like a:b:step");
  double a = 0, b = 0, step = 0;
  try {
    a = std::stod(spec.substr(0, c1));
    b = std::stod(spec.substr(c1 + 1, c2 - c1 - 1));
    step = std::stod(spec.substr(c2 + 1));
  } catch (const std::exception&) {
    throw Error(ErrorCode::invalid_input, "grid must look like a:b:step");
  }
  if (!std::isfinite(a) || !std::isfinite(b) || !(step > 0.0) || !(b >= a))
    throw Error(ErrorCode::invalid_input, "grid needs finite a <= b and step > 0");
  const auto n = static_cast<std::size_t>(std::floor((b - a) / step + 1e-9)) + 1;
  if (n > 10'000'000) throw Error(ErrorCode::invalid_input, "grid has too many points");
  std::vector<double> g(n);
  for (std::size_t k = 0; k < n; ++k) g[k] = a + static_cast<double>(k) * step;
  return g;
}

fs::path resolve_out(const Options& o, const std::string& fallback_name) {
  fs::path dir = o.out_dir;
  if (dir.empty())
    if (const char* env = std::getenv("Q1D_OUT_DIR")) dir = env;
  const fs::path p = o.out.empty() ? fs::path(fallback_name) : fs::path(o.out);
  if (p.is_absolute() || dir.empty()) return p;
  return dir / p;
}

std::ofstream open_out(const fs::path& p) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream f(p);
  if (!f) throw Error(ErrorCode::invalid_input, "cannot write " + p.string());
  return f;
}

json base_config(const std::string& command, const Options& o) {
  return {{"command", command}, {"input", o.input}};
}

CycleLaw load(const Options& o) { return io::load_law(o.input, o.allow_one_sided); }

const Cell& require_cell(const CycleLaw& law, const char* what) {
  const auto* g = std::get_if<GraphLaw>(&law);
  if (!g) throw Error(ErrorCode::invalid_input, std::string(what) + " needs a graph law");
  return *g->cell;
}

int cmd_validate(const Options& o, std::ostream& out) {
  const io::GraphSpec spec = io::load_graph_spec(o.input);
  const ValidationReport r = validate(spec.graph, spec.rates);
  json j = io::to_json(r);
  j["config"] = base_config("validate", o);
  out << j.dump(2) << '\n';
  return r.valid ? 0 : 1;
}

int cmd_minimality(const Options& o, std::ostream& out) {
  const io::GraphSpec spec = io::load_graph_spec(o.input);
  json j = io::to_json(minimality(spec.graph));
  j["config"] = base_config("minimality", o);
  out << j.dump(2) << '\n';
  return 0;
}

int cmd_summary(const Options& o, std::ostream& out) {
  const CycleLaw law = load(o);
  const RenewalModel model(law, o.allow_one_sided);
  const QualSummary q = qualitative_summary(model);
  json cfg = base_config("summary", o);
  cfg["law"] = io::to_json(law);
  cfg["allow_one_sided"] = o.allow_one_sided;
  json j{{"config", cfg},
         {"velocity", io::number(q.velocity)},
         {"lambda_c", io::number(q.lambda_c)},
         {"mgf_summary", io::to_json(model.summary())},
         {"qualitative_summary", io::to_json(q)}};
  out << j.dump(2) << '\n';
  return 0;
}

int cmd_rate_curve(const Options& o, std::ostream& out) {
  const CycleLaw law = load(o);
  const CurveKind kind = io::curve_kind_from_string(o.kind);
  if (o.route != "renewal" && o.route != "spectral" && o.route != "both")
    throw Error(ErrorCode::invalid_input, "route must be renewal, spectral or both");
  if (o.route != "renewal" && kind != CurveKind::position)
    throw Error(ErrorCode::invalid_input, "the spectral route only computes I");
  const std::vector<double> grid = parse_grid(o.grid);

  json cfg = base_config("rate-curve", o);
  cfg["law"] = io::to_json(law);
  cfg["kind"] = o.kind;
  cfg["route"] = o.route;
  cfg["grid"] = o.grid;

  std::ofstream file;
  const bool to_file = !o.out.empty();
  if (to_file) file = open_out(resolve_out(o, ""));
  std::ostream& os = to_file ? static_cast<std::ostream&>(file) : out;

  if (o.route == "both") {
    const Cell& cell = require_cell(law, "the spectral route");
    const RateCurve r = rate_curve(law, kind, grid);
    const RateCurve s = spectral_rate_curve(cell, grid);
    const double gap = io::write_curve_pair_csv(os, r, s, cfg);
    if (to_file) out << json{{"max_gap", io::number(gap)}, {"points", grid.size()}}.dump() << '\n';
  } else if (o.route == "spectral") {
    io::write_curve_csv(os, spectral_rate_curve(require_cell(law, "the spectral route"), grid), cfg);
  } else {
    io::write_curve_csv(os, rate_curve(law, kind, grid), cfg);
  }
  return 0;
}

int cmd_gc_check(const Options& o, std::ostream& out) {
  const CycleLaw law = load(o);
  json cfg = base_config("gc-check", o);
  cfg["law"] = io::to_json(law);
  cfg["grid_size"] = o.grid_size;
  cfg["tolerance"] = io::number(o.tol);
  json j = io::to_json(gc_check_analytic(law, o.grid_size, o.tol));
  if (const auto* g = std::get_if<GraphLaw>(&law)) {
    try {
      j["prediction"] = io::to_json(gc_predict(*g->cell));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::asymmetric_support) throw;
      j["prediction"] = {{"error", to_string(e.code())}, {"message", e.what()}};
    }
  }
  if (o.samples > 0) {
    cfg["samples"] = o.samples;
    cfg["seed"] = o.seed;
    cfg["significance"] = io::number(o.significance);
    const CycleSampler sampler(law);
    Rng rng = substream(o.seed, 0);
    std::vector<CycleSample> xs(o.samples);
    for (auto& x : xs) x = sampler(rng);
    j["independence_test"] = io::to_json(independence_test(xs, o.significance, IndependenceMethod::automatic, o.seed));
  }
  j["config"] = cfg;
  out << j.dump(2) << '\n';
  return 0;
}

int cmd_simulate(const Options& o, std::ostream& out) {
  const CycleLaw law = load(o);
  if (o.n == 0) throw Error(ErrorCode::invalid_input, "--n must be positive");
  json cfg = base_config("simulate", o);
  cfg["law"] = io::to_json(law);
  cfg["n"] = o.n;
  cfg["seed"] = o.seed;
  if (o.t > 0.0) cfg["t"] = io::number(o.t);

  const CycleSampler sampler(law);
  Rng rng = substream(o.seed, 0);
  std::ofstream file;
  if (o.raw) {
    file = open_out(resolve_out(o, "simulate.csv"));
    file << "# config: " << cfg.dump() << '\n';
    file << (o.t > 0.0 ? "index,position,theta\n" : "index,sign,duration\n");
  }
  const RenewalModel model(law);
  double s1 = 0.0, s2 = 0.0, d1 = 0.0;
  std::size_t plus = 0;
  for (std::size_t i = 0; i < o.n; ++i) {
    if (o.t > 0.0) {
      const std::int64_t z = sample_position(sampler, o.t, rng);
      const double th = static_cast<double>(z) / o.t;
      s1 += th;
      s2 += th * th;
      if (o.raw) file << i << ',' << z << ',' << th << '\n';
    } else {
      const CycleSample c = sampler(rng);
      plus += c.sign > 0 ? 1 : 0;
      d1 += c.duration;
      if (o.raw) file << i << ',' << c.sign << ',' << c.duration << '\n';
    }
  }
  const double n = static_cast<double>(o.n);
  json j{{"config", cfg}};
  if (o.t > 0.0) {
    const double mean = s1 / n;
    const double var = std::max(0.0, s2 / n - mean * mean);
    j["mean_theta"] = io::number(mean);
    j["std_error"] = io::number(std::sqrt(var / n));
    j["velocity"] = io::number(model.summary().velocity);
  } else {
    j["fraction_plus"] = io::number(static_cast<double>(plus) / n);
    j["mean_duration"] = io::number(d1 / n);
    j["p_plus"] = io::number(model.summary().p.plus);
    j["expected_mean_duration"] = io::number(model.summary().mean_duration);
  }
  out << j.dump(2) << '\n';
  return 0;
}

int cmd_mc_verify(const Options& o, std::ostream& out) {
  const CycleLaw law = load(o);
  McOptions mo;
  mo.seed = o.seed;
  mo.workers = o.workers;
  json cfg = base_config("mc-verify", o);
  cfg["law"] = io::to_json(law);
  cfg["n"] = o.n;
  cfg["seed"] = o.seed;
  cfg["workers"] = o.workers;
  cfg["bootstrap"] = mo.bootstrap;

  const RenewalModel model(law);
  EmpiricalCurve emp;
  CurveKind kind = CurveKind::position;
  if (o.level != 0) {
    kind = o.level > 0 ? CurveKind::j_plus : CurveKind::j_minus;
    cfg["level"] = o.level;
    cfg["t_cap"] = io::number(o.t_cap);
    emp = empirical_rate_hitting(law, o.level, o.n, o.t_cap, o.bins, mo);
  } else {
    cfg["t"] = io::number(o.t);
    emp = empirical_rate_position(law, o.t, o.n, o.bins, mo);
  }
  cfg["bin_width"] = io::number(emp.bin_width);

  auto csv = open_out(resolve_out(o, "mc_verify.csv"));
  io::write_empirical_csv(csv, emp, cfg);

  json j{{"config", cfg}, {"bins", emp.abscissa.size()}};
  if (emp.kind == EmpiricalKind::hitting) j["censored_fraction"] = io::number(emp.censored_fraction);
  if (emp.abscissa.size() >= 1) {
    const double lo = emp.abscissa.front() - emp.bin_width, hi = emp.abscissa.back() + emp.bin_width;
    const RateCurve analytic = rate_curve(model, kind, linear_grid(lo, hi, 801));
    std::optional<Window> window;
    if (o.window > 0.0) {
      const double centre = kind == CurveKind::position ? model.summary().velocity : 1.0 / std::abs(model.summary().velocity);
      window = Window{centre, o.window};
      cfg["window"] = {{"center", io::number(centre)}, {"half_width", io::number(o.window)}};
      j["config"] = cfg;
    }
    j["comparison"] = io::to_json(compare_curves(analytic, emp, window));
  }
  out << j.dump(2) << '\n';
  return 0;
}

void write_error(std::ostream& err, std::string_view code, const std::string& message, int exit_code) {
  err << json{{"error", code}, {"message", message}, {"exit_code", exit_code}}.dump() << '\n';
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Rate functions, simulation and fluctuation symmetry for quasi-one-dimensional walks", "q1d"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--out-dir", o.out_dir, "Directory for relative output paths (default: $Q1D_OUT_DIR)");

  std::function<int(const Options&, std::ostream&)> action;
  auto sub = [&](const char* name, const char* help, auto fn, const char* input_help) {
    CLI::App* s = app.add_subcommand(name, help);
    s->add_option("input", o.input, input_help)->required();
    s->callback([&action, fn] { action = fn; });
    return s;
  };

  sub("validate", "Check a graph file", cmd_validate, "graph JSON");
  sub("minimality", "Count source-to-sink paths of a graph", cmd_minimality, "graph JSON");
  auto* summary = sub("summary", "Critical tilt, velocity and rate-function shape", cmd_summary, "law JSON");
  summary->add_flag("--allow-one-sided", o.allow_one_sided, "Accept laws whose cycles all have the same sign");

  auto* rc = sub("rate-curve", "Tabulate I, J+ or J- on a grid", cmd_rate_curve, "law JSON");
  rc->add_option("--kind", o.kind, "I, J+ or J-")->check(CLI::IsMember({"I", "J+", "J-"}));
  rc->add_option("--route", o.route, "renewal, spectral or both")->check(CLI::IsMember({"renewal", "spectral", "both"}));
  rc->add_option("--grid", o.grid, "a:b:step")->required();
  rc->add_option("--out", o.out, "CSV path (default: standard output)");

  auto* gc = sub("gc-check", "Fluctuation-symmetry verdict", cmd_gc_check, "law JSON");
  gc->add_option("--grid-size", o.grid_size, "Points of the tilt grid");
  gc->add_option("--tol", o.tol, "Tolerance on the ratio deviation");
  gc->add_option("--samples", o.samples, "Also run the sign/duration independence test on this many cycles");
  gc->add_option("--significance", o.significance, "Level of the independence test");
  gc->add_option("--seed", o.seed, "Seed of the sampled test");

  auto* sim = sub("simulate", "Sample cycles, or positions at time t", cmd_simulate, "law JSON");
  sim->add_option("--t", o.t, "Horizon; omit to sample cycles");
  sim->add_option("--n", o.n, "Number of samples")->required();
  sim->add_option("--seed", o.seed, "Seed")->required();
  sim->add_flag("--raw", o.raw, "Write every sample as CSV");
  sim->add_option("--out", o.out, "CSV path for --raw (default simulate.csv)");

  auto* mc = sub("mc-verify", "Empirical rate function against the analytic one", cmd_mc_verify, "law JSON");
  mc->add_option("--t", o.t, "Horizon for Z_t/t");
  mc->add_option("--n", o.n, "Number of samples")->required();
  mc->add_option("--bins", o.bins, "Bin width (default 2/t, or 2/|level|)");
  mc->add_option("--seed", o.seed, "Seed")->required();
  mc->add_option("--workers", o.workers, "Sampling threads");
  mc->add_option("--level", o.level, "Estimate J for T_level/|level| instead of I");
  mc->add_option("--t-cap", o.t_cap, "Censoring time with --level");
  mc->add_option("--window", o.window, "Only compare bins within this distance of the law-of-large-numbers point");
  mc->add_option("--out", o.out, "CSV path (default mc_verify.csv)");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  if (!rev.empty()) rev.pop_back();
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    write_error(err, "InvalidInput", e.what(), 1);
    return 1;
  }

  try {
    return action(o, out);
  } catch (const Error& e) {
    const int code = is_validation_error(e.code()) ? 1 : 2;
    write_error(err, to_string(e.code()), e.what(), code);
    return code;
  } catch (const fs::filesystem_error& e) {
    write_error(err, "InvalidInput", e.what(), 1);
    return 1;
  } catch (const std::exception& e) {
    write_error(err, "NumericalFailure", e.what(), 2);
    return 2;
  }
}

}  // namespace q1d
