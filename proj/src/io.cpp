#include "q1d/io.hpp"

#include "q1d/detail/overloaded.hpp"
#include "q1d/errors.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>

namespace q1d::io {

using detail::overloaded;

namespace {

[[noreturn]] void fail(const std::string& msg) { throw Error(ErrorCode::invalid_input, msg); }

template <typename T>
T get(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) fail(std::string("missing field \"") + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    fail(std::string("field \"") + key + "\" has the wrong type");
  }
}

double get_number(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) fail(std::string("missing field \"") + key + "\"");
  return read_number(j.at(key));
}

json read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    fail(path.string() + ": " + e.what());
  }
}

void write_file(const json& j, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) fail("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

json optional_number(const std::optional<double>& x) { return x ? number(*x) : json(nullptr); }
std::optional<double> read_optional(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return read_number(j.at(key));
}

std::string_view to_string(MinimalityReason r) {
  switch (r) {
    case MinimalityReason::minimal: return "minimal";
    case MinimalityReason::asymmetric_support: return "asymmetric_support";
    case MinimalityReason::multiple_paths: return "multiple_paths";
  }
  return "multiple_paths";
}

std::string_view to_string(BoundaryBehavior b) { return b == BoundaryBehavior::diverges ? "diverges" : "finite_limit"; }

template <typename T, typename F>
json pm(const PlusMinus<T>& x, F f) {
  return json{{"minus", f(x.minus)}, {"plus", f(x.plus)}};
}

void write_config_line(std::ostream& os, const json& config) { os << "# config: " << config.dump() << '\n'; }

std::string csv_number(double x) {
  if (std::isnan(x)) throw Error(ErrorCode::internal_inconsistency, "refusing to write NaN");
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace

json number(double x) {
  if (std::isnan(x)) throw Error(ErrorCode::internal_inconsistency, "refusing to serialize NaN");
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

json number(const ExtReal& x) { return number(x.as_double()); }

double read_number(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
  }
  fail("expected a number or \"inf\"");
}

GraphSpec graph_spec_from_json(const json& j) {
  if (!j.is_object()) fail("graph spec must be a JSON object");
  GraphSpec s;
  s.graph.vertices = get<std::vector<std::string>>(j, "vertices");
  s.graph.source = get<std::string>(j, "source");
  s.graph.sink = get<std::string>(j, "sink");
  const json edges = get<json>(j, "edges");
  if (!edges.is_array()) fail("\"edges\" must be an array");
  for (const auto& e : edges) {
    std::pair<std::string, std::string> key{get<std::string>(e, "from"), get<std::string>(e, "to")};
    const double rate = get_number(e, "rate");
    if (!std::isfinite(rate) || !(rate > 0.0))
      fail("edge " + key.first + "->" + key.second + ": rate must be finite and positive");
    if (!s.rates.emplace(key, rate).second) fail("duplicate edge " + key.first + "->" + key.second);
    s.graph.edges.push_back(std::move(key));
  }
  return s;
}

json to_json(const GraphSpec& spec) {
  json edges = json::array();
  for (const auto& e : spec.graph.edges)
    edges.push_back({{"from", e.first}, {"to", e.second}, {"rate", number(spec.rates.at(e))}});
  return {{"vertices", spec.graph.vertices}, {"source", spec.graph.source}, {"sink", spec.graph.sink}, {"edges", edges}};
}

GraphSpec load_graph_spec(const std::filesystem::path& path) { return graph_spec_from_json(read_file(path)); }
void save_graph_spec(const GraphSpec& spec, const std::filesystem::path& path) { write_file(to_json(spec), path); }

CycleLaw law_from_json(const json& j, const std::filesystem::path& base_dir, bool allow_one_sided) {
  const auto kind = get<std::string>(j, "kind");
  CycleLaw law;
  if (kind == "graph") {
    if (j.contains("graph")) {
      const GraphSpec s = graph_spec_from_json(j.at("graph"));
      law = make_graph_law(Cell::make(s.graph, s.rates));
    } else {
      const auto file = get<std::string>(j, "graph_file");
      const std::filesystem::path p = std::filesystem::path(file).is_absolute() ? std::filesystem::path(file) : base_dir / file;
      const GraphSpec s = load_graph_spec(p);
      law = make_graph_law(Cell::make(s.graph, s.rates), file);
    }
  } else if (kind == "discrete") {
    DiscreteLaw d;
    const json atoms = get<json>(j, "atoms");
    if (!atoms.is_array()) fail("\"atoms\" must be an array");
    for (const auto& a : atoms) {
      if (!a.is_array() || a.size() != 3) fail("each atom must be [sign, duration, probability]");
      const double sign = read_number(a[0]);
      if (sign != 1.0 && sign != -1.0) fail("atom sign must be +1 or -1");
      d.atoms.push_back({static_cast<int>(sign), read_number(a[1]), read_number(a[2])});
    }
    law = d;
  } else if (kind == "exponential") {
    law = ExponentialLaw{get_number(j, "p"), get_number(j, "beta_plus"), get_number(j, "beta_minus")};
  } else if (kind == "gamma") {
    law = GammaLaw{get_number(j, "p"), get_number(j, "k_plus"), get_number(j, "beta_plus"), get_number(j, "k_minus"),
                   get_number(j, "beta_minus")};
  } else {
    fail("unknown law kind \"" + kind + "\"");
  }
  validate_law(law, allow_one_sided);
  return law;
}

json to_json(const CycleLaw& law) {
  return std::visit(overloaded{
                        [](const GraphLaw& g) -> json {
                          if (!g.graph_file.empty()) return {{"kind", "graph"}, {"graph_file", g.graph_file}};
                          return {{"kind", "graph"}, {"graph", to_json(GraphSpec{g.cell->graph(), g.cell->rate_map()})}};
                        },
                        [](const DiscreteLaw& d) -> json {
                          json atoms = json::array();
                          for (const auto& a : d.atoms) atoms.push_back({a.sign, a.duration, a.probability});
                          return {{"kind", "discrete"}, {"atoms", atoms}};
                        },
                        [](const ExponentialLaw& e) -> json {
                          return {{"kind", "exponential"}, {"p", e.p}, {"beta_plus", e.beta_plus}, {"beta_minus", e.beta_minus}};
                        },
                        [](const GammaLaw& g) -> json {
                          return {{"kind", "gamma"},         {"p", g.p},
                                  {"k_plus", g.k_plus},      {"beta_plus", g.beta_plus},
                                  {"k_minus", g.k_minus},    {"beta_minus", g.beta_minus}};
                        },
                    },
                    law);
}

CycleLaw load_law(const std::filesystem::path& path, bool allow_one_sided) {
  return law_from_json(read_file(path), path.parent_path(), allow_one_sided);
}

void save_law(const CycleLaw& law, const std::filesystem::path& path) { write_file(to_json(law), path); }

json to_json(const ValidationReport& r) {
  return {{"valid", r.valid},
          {"structure_ok", r.structure_ok},
          {"strongly_connected", r.strongly_connected},
          {"rates_positive", r.rates_positive},
          {"support_symmetric", r.support_symmetric},
          {"failures", r.failures}};
}

ValidationReport validation_report_from_json(const json& j) {
  return {get<bool>(j, "valid"),
          get<bool>(j, "structure_ok"),
          get<bool>(j, "strongly_connected"),
          get<bool>(j, "rates_positive"),
          get<bool>(j, "support_symmetric"),
          get<std::vector<std::string>>(j, "failures")};
}

json to_json(const MinimalityReport& r) {
  return {{"minimal", r.minimal},
          {"support_symmetric", r.support_symmetric},
          {"path_count", r.path_count},
          {"reason", to_string(r.reason)},
          {"path", r.path ? json(*r.path) : json(nullptr)}};
}

MinimalityReport minimality_report_from_json(const json& j) {
  MinimalityReport r;
  r.minimal = get<bool>(j, "minimal");
  r.support_symmetric = get<bool>(j, "support_symmetric");
  r.path_count = get<std::size_t>(j, "path_count");
  const auto reason = get<std::string>(j, "reason");
  if (reason == "minimal") r.reason = MinimalityReason::minimal;
  else if (reason == "asymmetric_support") r.reason = MinimalityReason::asymmetric_support;
  else if (reason == "multiple_paths") r.reason = MinimalityReason::multiple_paths;
  else fail("unknown minimality reason \"" + reason + "\"");
  if (j.contains("path") && !j.at("path").is_null()) r.path = get<GatePath>(j, "path");
  return r;
}

json to_json(const MgfSummary& s) {
  auto num = [](double x) { return number(x); };
  json j{{"lambda_c", number(s.lambda_c)},
         {"alpha", pm(s.alpha, num)},
         {"p", pm(s.p, num)},
         {"mean_duration", number(s.mean_duration)},
         {"velocity", number(s.velocity)},
         {"lambda_interior", nullptr}};
  if (s.lambda_interior) j["lambda_interior"] = number(*s.lambda_interior);
  return j;
}

MgfSummary mgf_summary_from_json(const json& j) {
  MgfSummary s;
  s.lambda_c = get_number(j, "lambda_c");
  s.alpha = {get_number(j.at("alpha"), "minus"), get_number(j.at("alpha"), "plus")};
  s.p = {get_number(j.at("p"), "minus"), get_number(j.at("p"), "plus")};
  s.mean_duration = get_number(j, "mean_duration");
  s.velocity = get_number(j, "velocity");
  if (const auto li = read_optional(j, "lambda_interior")) s.lambda_interior = ExtReal::from_double(*li);
  return s;
}

json to_json(const QualSummary& s) {
  auto num = [](double x) { return number(x); };
  auto ext = [](const ExtReal& x) { return number(x); };
  auto beh = [](BoundaryBehavior b) { return json(to_string(b)); };
  auto opt = [](const std::optional<double>& x) { return optional_number(x); };
  return {{"velocity", number(s.velocity)},
          {"lambda_c", number(s.lambda_c)},
          {"alpha", pm(s.alpha, num)},
          {"theta_c", pm(s.theta_c, ext)},
          {"left_endpoint", number(s.left_endpoint)},
          {"right_endpoint", number(s.right_endpoint)},
          {"boundary", pm(s.boundary, beh)},
          {"boundary_value", pm(s.boundary_value, opt)}};
}

QualSummary qual_summary_from_json(const json& j) {
  QualSummary s;
  s.velocity = get_number(j, "velocity");
  s.lambda_c = get_number(j, "lambda_c");
  s.alpha = {get_number(j.at("alpha"), "minus"), get_number(j.at("alpha"), "plus")};
  s.theta_c = {ExtReal::from_double(get_number(j.at("theta_c"), "minus")),
               ExtReal::from_double(get_number(j.at("theta_c"), "plus"))};
  s.left_endpoint = get_number(j, "left_endpoint");
  s.right_endpoint = get_number(j, "right_endpoint");
  auto beh = [](const json& b, const char* key) {
    return get<std::string>(b, key) == "diverges" ? BoundaryBehavior::diverges : BoundaryBehavior::finite_limit;
  };
  s.boundary = {beh(j.at("boundary"), "minus"), beh(j.at("boundary"), "plus")};
  s.boundary_value = {read_optional(j.at("boundary_value"), "minus"), read_optional(j.at("boundary_value"), "plus")};
  return s;
}

json to_json(const GcReport& r) {
  return {{"verdict", to_string(r.verdict)},
          {"C", optional_number(r.C)},
          {"c", optional_number(r.c)},
          {"delta", optional_number(r.delta)},
          {"max_ratio_deviation", number(r.max_ratio_deviation)},
          {"symmetry_residual", number(r.symmetry_residual)},
          {"lambda_c", number(r.lambda_c)},
          {"p", {{"minus", number(r.p.minus)}, {"plus", number(r.p.plus)}}},
          {"grid_size", r.grid_size},
          {"tolerance", number(r.tolerance)}};
}

GcReport gc_report_from_json(const json& j) {
  GcReport r;
  const auto v = get<std::string>(j, "verdict");
  if (v == "holds") r.verdict = GcVerdict::holds;
  else if (v == "fails") r.verdict = GcVerdict::fails;
  else if (v == "inconclusive") r.verdict = GcVerdict::inconclusive;
  else fail("unknown verdict \"" + v + "\"");
  r.C = read_optional(j, "C");
  r.c = read_optional(j, "c");
  r.delta = read_optional(j, "delta");
  r.max_ratio_deviation = get_number(j, "max_ratio_deviation");
  r.symmetry_residual = get_number(j, "symmetry_residual");
  r.lambda_c = get_number(j, "lambda_c");
  r.p = {get_number(j.at("p"), "minus"), get_number(j.at("p"), "plus")};
  r.grid_size = get<std::size_t>(j, "grid_size");
  r.tolerance = get_number(j, "tolerance");
  return r;
}

json to_json(const GcPredictionResult& r) {
  return {{"prediction", to_string(r.prediction)}, {"delta", optional_number(r.delta)}};
}

json to_json(const TestReport& r) {
  return {{"method", to_string(r.method)},   {"statistic", number(r.statistic)}, {"p_value", number(r.p_value)},
          {"reject", r.reject},              {"n_plus", r.n_plus},               {"n_minus", r.n_minus}};
}

json to_json(const ComparisonReport& r) {
  json bins = json::array();
  for (const auto& b : r.bins)
    bins.push_back({{"abscissa", number(b.abscissa)},
                    {"analytic", number(b.analytic)},
                    {"estimate", number(b.estimate)},
                    {"lo", number(b.lo)},
                    {"hi", number(b.hi)},
                    {"covered", b.covered}});
  return {{"coverage", number(r.coverage)},
          {"max_gap_covered", number(r.max_gap_covered)},
          {"max_gap", number(r.max_gap)},
          {"bins", bins}};
}

std::string_view to_string(CurveKind k) {
  switch (k) {
    case CurveKind::j_plus: return "J+";
    case CurveKind::j_minus: return "J-";
    case CurveKind::position: return "I";
  }
  return "I";
}

CurveKind curve_kind_from_string(std::string_view s) {
  if (s == "I") return CurveKind::position;
  if (s == "J+") return CurveKind::j_plus;
  if (s == "J-") return CurveKind::j_minus;
  fail("unknown curve kind \"" + std::string(s) + "\" (expected I, J+ or J-)");
}

void write_curve_csv(std::ostream& os, const RateCurve& curve, const json& config) {
  write_config_line(os, config);
  os << "abscissa,value,is_infinite\n";
  for (std::size_t i = 0; i < curve.grid.size(); ++i)
    os << csv_number(curve.grid[i]) << ',' << csv_number(curve.values[i].as_double()) << ','
       << (curve.values[i].is_infinite() ? 1 : 0) << '\n';
}

double write_curve_pair_csv(std::ostream& os, const RateCurve& renewal, const RateCurve& spectral, const json& config) {
  if (renewal.grid != spectral.grid) throw Error(ErrorCode::internal_inconsistency, "route curves on different grids");
  double max_gap = 0.0;
  std::vector<double> gaps(renewal.grid.size(), std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < gaps.size(); ++i) {
    const ExtReal a = renewal.values[i], b = spectral.values[i];
    if (a.is_finite() && b.is_finite()) {
      gaps[i] = std::abs(a.value() - b.value());
      max_gap = std::max(max_gap, gaps[i]);
    } else if (a.is_infinite() && b.is_infinite()) {
      gaps[i] = 0.0;
    }
  }
  json cfg = config;
  cfg["max_gap"] = number(max_gap);
  write_config_line(os, cfg);
  os << "abscissa,renewal,spectral,renewal_is_infinite,spectral_is_infinite,gap\n";
  for (std::size_t i = 0; i < gaps.size(); ++i)
    os << csv_number(renewal.grid[i]) << ',' << csv_number(renewal.values[i].as_double()) << ','
       << csv_number(spectral.values[i].as_double()) << ',' << (renewal.values[i].is_infinite() ? 1 : 0) << ','
       << (spectral.values[i].is_infinite() ? 1 : 0) << ',' << csv_number(gaps[i]) << '\n';
  return max_gap;
}

void write_empirical_csv(std::ostream& os, const EmpiricalCurve& curve, const json& config) {
  write_config_line(os, config);
  os << "abscissa,estimate,lo,hi,count\n";
  for (std::size_t i = 0; i < curve.abscissa.size(); ++i)
    os << csv_number(curve.abscissa[i]) << ',' << csv_number(curve.estimate[i]) << ','
       << csv_number(curve.lo[i].as_double()) << ',' << csv_number(curve.hi[i].as_double()) << ',' << curve.count[i]
       << '\n';
}

}  // namespace q1d::io
