#pragma once

#include <Eigen/Dense>

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace q1d {

/// The fundamental cell as declared by the user: named vertices, oriented
/// edges, and the two distinguished vertices glued together by the lattice
/// (the sink of cell n is the source of cell n+1).
struct FundamentalGraph {
  std::vector<std::string> vertices;
  std::string source;
  std::string sink;
  std::vector<std::pair<std::string, std::string>> edges;

  friend bool operator==(const FundamentalGraph&, const FundamentalGraph&) = default;
};

using RateMap = std::map<std::pair<std::string, std::string>, double>;

struct ValidationReport {
  bool valid = false;
  bool structure_ok = false;
  bool strongly_connected = false;
  bool rates_positive = false;
  bool support_symmetric = false;
  std::vector<std::string> failures;
};

ValidationReport validate(const FundamentalGraph& graph, const RateMap& rates);

/// A vertex (name, cell) of the infinite lattice; `vertex` indexes the cell
/// graph and is never the sink. Gates are the lattice copies of the source.
struct LatticeVertex {
  std::int64_t cell = 0;
  int vertex = 0;

  friend auto operator<=>(const LatticeVertex&, const LatticeVertex&) = default;
};

/// One lattice move out of a vertex, relative to the cell of the origin.
struct CellMove {
  int to = 0;
  int cell_offset = 0;
  double rate = 0.0;
};

/// Validated, indexed form of (graph, rates). Immutable after construction.
class Cell {
 public:
  /// Throws Error(invalid_input) listing the validation failures.
  static Cell make(const FundamentalGraph& graph, const RateMap& rates);

  int size() const { return static_cast<int>(names_.size()); }
  int source() const { return source_; }
  int sink() const { return sink_; }
  const std::string& name(int v) const { return names_[static_cast<std::size_t>(v)]; }
  std::optional<int> index_of(const std::string& name) const;

  /// rate(u, v) on the cell graph, 0 where there is no edge.
  const Eigen::MatrixXd& rate_matrix() const { return rates_; }
  double rate(int from, int to) const { return rates_(from, to); }
  bool has_edge(int from, int to) const { return rates_(from, to) > 0.0; }

  /// Total exit rate of the lattice copy of v. For the source and the sink
  /// this is the gate exit rate, out(source) + out(sink).
  double vertex_rate(int v) const;
  /// max over lattice vertices of the exit rate.
  double max_exit_rate() const;

  /// Lattice moves out of (v, n), v != sink; targets are (to, n + cell_offset).
  std::span<const CellMove> moves(int v) const;
  double exit_rate(int v) const;

  bool is_gate(int v) const { return v == source_; }
  const FundamentalGraph& graph() const { return graph_; }
  const RateMap& rate_map() const { return rate_map_; }

 private:
  FundamentalGraph graph_;
  RateMap rate_map_;
  std::vector<std::string> names_;
  int source_ = 0;
  int sink_ = 1;
  Eigen::MatrixXd rates_;
  std::vector<std::vector<CellMove>> moves_;
  std::vector<double> exit_rates_;
};

struct LatticeEdge {
  LatticeVertex target;
  double rate = 0.0;
};

/// Outgoing edges of a lattice vertex. Order: edges of the cell vertex in
/// declaration order, then (for gates) the edges of the sink mapped one cell
/// down.
std::vector<LatticeEdge> lattice_out_edges(const Cell& cell, LatticeVertex x);

/// A simple oriented path source -> sink, by vertex name.
using GatePath = std::vector<std::string>;

/// Every simple oriented path from source to sink. Exhaustive DFS; meant for
/// cells of up to a couple dozen vertices.
std::vector<GatePath> enumerate_gate_paths(const FundamentalGraph& graph);

enum class MinimalityReason { minimal, asymmetric_support, multiple_paths };

struct MinimalityReport {
  bool minimal = false;
  bool support_symmetric = false;
  std::size_t path_count = 0;
  MinimalityReason reason = MinimalityReason::multiple_paths;
  std::optional<GatePath> path;
};

MinimalityReport minimality(const FundamentalGraph& graph);
bool is_minimal(const FundamentalGraph& graph);
bool support_symmetric(const FundamentalGraph& graph);

/// log of (product of forward rates along the unique gate path) over
/// (product of backward rates). Throws Error(not_minimal).
double gc_delta(const Cell& cell);

}  // namespace q1d
