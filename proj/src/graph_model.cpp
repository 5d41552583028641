#include "q1d/graph_model.hpp"

#include "q1d/errors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <sstream>
#include <unordered_map>

namespace q1d {

namespace {

struct Indexed {
  std::unordered_map<std::string, int> index;
  std::vector<std::pair<int, int>> edges;
  int source = -1;
  int sink = -1;
};

// Structural indexing; unknown names are reported, not thrown.
Indexed index_graph(const FundamentalGraph& g, std::vector<std::string>* failures) {
  Indexed out;
  for (std::size_t i = 0; i < g.vertices.size(); ++i) {
    if (!out.index.emplace(g.vertices[i], static_cast<int>(i)).second && failures)
      failures->push_back("duplicate vertex '" + g.vertices[i] + "'");
  }
  auto lookup = [&](const std::string& name, const char* what) {
    auto it = out.index.find(name);
    if (it == out.index.end()) {
      if (failures) failures->push_back(std::string(what) + " '" + name + "' is not a declared vertex");
      return -1;
    }
    return it->second;
  };
  out.source = lookup(g.source, "source");
  out.sink = lookup(g.sink, "sink");
  if (out.source >= 0 && out.source == out.sink && failures) failures->push_back("source and sink coincide");
  std::set<std::pair<int, int>> seen;
  for (const auto& [from, to] : g.edges) {
    const int a = lookup(from, "edge endpoint");
    const int b = lookup(to, "edge endpoint");
    if (a < 0 || b < 0) continue;
    if (a == b) {
      if (failures) failures->push_back("self-loop on '" + from + "'");
      continue;
    }
    if (!seen.emplace(a, b).second) {
      if (failures) failures->push_back("duplicate edge '" + from + "' -> '" + to + "'");
      continue;
    }
    out.edges.emplace_back(a, b);
  }
  return out;
}

bool strongly_connected(std::size_t n, const std::vector<std::pair<int, int>>& edges) {
  if (n == 0) return false;
  auto reach_all = [&](bool reverse) {
    std::vector<std::vector<int>> adj(n);
    for (auto [a, b] : edges) {
      if (reverse) std::swap(a, b);
      adj[static_cast<std::size_t>(a)].push_back(b);
    }
    std::vector<char> seen(n, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      for (int w : adj[static_cast<std::size_t>(v)])
        if (!seen[static_cast<std::size_t>(w)]) {
          seen[static_cast<std::size_t>(w)] = 1;
          stack.push_back(w);
        }
    }
    return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
  };
  return reach_all(false) && reach_all(true);
}

bool symmetric_support(const std::vector<std::pair<int, int>>& edges) {
  std::set<std::pair<int, int>> s(edges.begin(), edges.end());
  return std::all_of(edges.begin(), edges.end(), [&](auto e) { return s.count({e.second, e.first}) > 0; });
}

}  // namespace

ValidationReport validate(const FundamentalGraph& graph, const RateMap& rates) {
  ValidationReport r;
  const Indexed idx = index_graph(graph, &r.failures);
  r.structure_ok = r.failures.empty();

  r.rates_positive = true;
  for (const auto& e : graph.edges) {
    auto it = rates.find(e);
    if (it == rates.end()) {
      r.failures.push_back("missing rate for edge '" + e.first + "' -> '" + e.second + "'");
      r.rates_positive = false;
    } else if (!(it->second > 0.0) || !std::isfinite(it->second)) {
      r.failures.push_back("non-positive or non-finite rate on edge '" + e.first + "' -> '" + e.second + "'");
      r.rates_positive = false;
    }
  }
  for (const auto& [edge, rate] : rates) {
    (void)rate;
    if (std::find(graph.edges.begin(), graph.edges.end(), edge) == graph.edges.end()) {
      r.failures.push_back("rate given for undeclared edge '" + edge.first + "' -> '" + edge.second + "'");
      r.structure_ok = false;
    }
  }

  r.strongly_connected = strongly_connected(graph.vertices.size(), idx.edges);
  if (!r.strongly_connected) r.failures.push_back("cell graph is not strongly connected");
  r.support_symmetric = symmetric_support(idx.edges);
  r.valid = r.structure_ok && r.rates_positive && r.strongly_connected;
  return r;
}

Cell Cell::make(const FundamentalGraph& graph, const RateMap& rates) {
  const ValidationReport report = validate(graph, rates);
  if (!report.valid) {
    std::ostringstream os;
    os << "invalid cell:";
    for (const auto& f : report.failures) os << " " << f << ";";
    throw Error(ErrorCode::invalid_input, os.str());
  }
  const Indexed idx = index_graph(graph, nullptr);
  Cell c;
  c.graph_ = graph;
  c.rate_map_ = rates;
  c.names_ = graph.vertices;
  c.source_ = idx.source;
  c.sink_ = idx.sink;
  const int n = c.size();
  c.rates_ = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t k = 0; k < graph.edges.size(); ++k) {
    const auto [a, b] = idx.edges[k];
    c.rates_(a, b) = rates.at(graph.edges[k]);
  }

  // Lattice moves, following the three edge families of the glued lattice.
  c.moves_.assign(static_cast<std::size_t>(n), {});
  c.exit_rates_.assign(static_cast<std::size_t>(n), 0.0);
  for (int v = 0; v < n; ++v) {
    if (v == c.sink_) continue;
    auto& mv = c.moves_[static_cast<std::size_t>(v)];
    for (auto [a, b] : idx.edges) {
      if (a != v) continue;
      if (b == c.sink_)
        mv.push_back({c.source_, +1, c.rates_(a, b)});
      else
        mv.push_back({b, 0, c.rates_(a, b)});
    }
    if (v == c.source_) {
      for (auto [a, b] : idx.edges)
        if (a == c.sink_) mv.push_back({b, -1, c.rates_(a, b)});
    }
    double total = 0.0;
    for (const auto& m : mv) total += m.rate;
    c.exit_rates_[static_cast<std::size_t>(v)] = total;
  }
  return c;
}

std::optional<int> Cell::index_of(const std::string& name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) return std::nullopt;
  return static_cast<int>(it - names_.begin());
}

double Cell::vertex_rate(int v) const { return v == sink_ ? exit_rate(source_) : exit_rate(v); }

double Cell::max_exit_rate() const { return *std::max_element(exit_rates_.begin(), exit_rates_.end()); }

std::span<const CellMove> Cell::moves(int v) const { return moves_[static_cast<std::size_t>(v)]; }

double Cell::exit_rate(int v) const { return exit_rates_[static_cast<std::size_t>(v)]; }

std::vector<LatticeEdge> lattice_out_edges(const Cell& cell, LatticeVertex x) {
  std::vector<LatticeEdge> out;
  for (const auto& m : cell.moves(x.vertex)) out.push_back({{x.cell + m.cell_offset, m.to}, m.rate});
  return out;
}

std::vector<GatePath> enumerate_gate_paths(const FundamentalGraph& graph) {
  const Indexed idx = index_graph(graph, nullptr);
  if (idx.source < 0 || idx.sink < 0) return {};
  std::vector<std::vector<int>> adj(graph.vertices.size());
  for (auto [a, b] : idx.edges) adj[static_cast<std::size_t>(a)].push_back(b);

  std::vector<GatePath> paths;
  std::vector<int> current{idx.source};
  std::vector<char> on_path(graph.vertices.size(), 0);
  on_path[static_cast<std::size_t>(idx.source)] = 1;
  std::function<void(int)> dfs = [&](int v) {
    if (v == idx.sink) {
      GatePath p;
      for (int u : current) p.push_back(graph.vertices[static_cast<std::size_t>(u)]);
      paths.push_back(std::move(p));
      return;
    }
    for (int w : adj[static_cast<std::size_t>(v)]) {
      if (on_path[static_cast<std::size_t>(w)]) continue;
      on_path[static_cast<std::size_t>(w)] = 1;
      current.push_back(w);
      dfs(w);
      current.pop_back();
      on_path[static_cast<std::size_t>(w)] = 0;
    }
  };
  dfs(idx.source);
  return paths;
}

bool support_symmetric(const FundamentalGraph& graph) { return symmetric_support(index_graph(graph, nullptr).edges); }

MinimalityReport minimality(const FundamentalGraph& graph) {
  MinimalityReport r;
  r.support_symmetric = support_symmetric(graph);
  auto paths = enumerate_gate_paths(graph);
  r.path_count = paths.size();
  if (!r.support_symmetric) {
    r.reason = MinimalityReason::asymmetric_support;
  } else if (paths.size() != 1) {
    r.reason = MinimalityReason::multiple_paths;
  } else {
    r.minimal = true;
    r.reason = MinimalityReason::minimal;
    r.path = std::move(paths.front());
  }
  return r;
}

bool is_minimal(const FundamentalGraph& graph) { return minimality(graph).minimal; }

double gc_delta(const Cell& cell) {
  const MinimalityReport m = minimality(cell.graph());
  if (!m.minimal) throw Error(ErrorCode::not_minimal, "gc_delta: cell graph is not (source, sink)-minimal");
  const GatePath& p = *m.path;
  double delta = 0.0;
  for (std::size_t i = 0; i + 1 < p.size(); ++i) {
    const auto& rm = cell.rate_map();
    delta += std::log(rm.at({p[i], p[i + 1]})) - std::log(rm.at({p[i + 1], p[i]}));
  }
  return delta;
}

}  // namespace q1d
