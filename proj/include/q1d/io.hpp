#pragma once

#include "q1d/cycle_law.hpp"
#include "q1d/gc_analysis.hpp"
#include "q1d/graph_model.hpp"
#include "q1d/mc_verify.hpp"
#include "q1d/ratefn.hpp"
#include "q1d/renewal_mgf.hpp"

#include "json.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>

namespace q1d::io {

using json = nlohmann::json;

/// Numbers are written as JSON numbers when finite, "inf" / "-inf" otherwise.
/// NaN is rejected with Error(internal_inconsistency).
json number(double x);
json number(const ExtReal& x);
double read_number(const json& j);

struct GraphSpec {
  FundamentalGraph graph;
  RateMap rates;

  friend bool operator==(const GraphSpec&, const GraphSpec&) = default;
};

/// Parses the file layout {vertices, source, sink, edges: [{from, to, rate}]}.
/// Throws Error(invalid_input) on malformed input, duplicate edges or
/// non-positive rates. Connectivity is left to validate().
GraphSpec graph_spec_from_json(const json& j);
json to_json(const GraphSpec& spec);
GraphSpec load_graph_spec(const std::filesystem::path& path);
void save_graph_spec(const GraphSpec& spec, const std::filesystem::path& path);

/// Law file: {"kind": "graph"|"discrete"|"exponential"|"gamma", ...}. A graph
/// law names its cell by "graph_file" (relative to base_dir) or inlines it
/// under "graph".
CycleLaw law_from_json(const json& j, const std::filesystem::path& base_dir = {}, bool allow_one_sided = false);
json to_json(const CycleLaw& law);
CycleLaw load_law(const std::filesystem::path& path, bool allow_one_sided = false);
void save_law(const CycleLaw& law, const std::filesystem::path& path);

json to_json(const ValidationReport& r);
ValidationReport validation_report_from_json(const json& j);
json to_json(const MinimalityReport& r);
MinimalityReport minimality_report_from_json(const json& j);
json to_json(const MgfSummary& s);
MgfSummary mgf_summary_from_json(const json& j);
json to_json(const QualSummary& s);
QualSummary qual_summary_from_json(const json& j);
json to_json(const GcReport& r);
GcReport gc_report_from_json(const json& j);
json to_json(const GcPredictionResult& r);
json to_json(const TestReport& r);
json to_json(const ComparisonReport& r);

std::string_view to_string(CurveKind k);
CurveKind curve_kind_from_string(std::string_view s);

/// CSV with columns abscissa,value,is_infinite. `config` goes on the first
/// line as "# config: {...}".
void write_curve_csv(std::ostream& os, const RateCurve& curve, const json& config);
/// Two routes on the same grid: abscissa,renewal,spectral,renewal_is_infinite,
/// spectral_is_infinite,gap. Returns the max gap over points finite on both.
double write_curve_pair_csv(std::ostream& os, const RateCurve& renewal, const RateCurve& spectral, const json& config);
/// abscissa,estimate,lo,hi,count.
void write_empirical_csv(std::ostream& os, const EmpiricalCurve& curve, const json& config);

}  // namespace q1d::io
