#pragma once

#include "q1d/cycle_law.hpp"
#include "q1d/graph_model.hpp"

#include <random>
#include <string>
#include <tuple>
#include <vector>

namespace fixtures {

using q1d::Cell;
using q1d::FundamentalGraph;
using q1d::RateMap;

struct Spec {
  std::string name;
  FundamentalGraph graph;
  RateMap rates;

  Cell cell() const { return Cell::make(graph, rates); }
  q1d::CycleLaw law() const { return q1d::make_graph_law(cell()); }
};

inline Spec build(std::string name, std::vector<std::string> vertices, std::string source, std::string sink,
                  const std::vector<std::tuple<std::string, std::string, double>>& edges) {
  Spec s{std::move(name), {std::move(vertices), std::move(source), std::move(sink), {}}, {}};
  for (const auto& [a, b, r] : edges) {
    s.graph.edges.emplace_back(a, b);
    s.rates[{a, b}] = r;
  }
  return s;
}

inline Spec two_vertex(double a, double b) { return build("two_vertex", {"s", "t"}, "s", "t", {{"s", "t", a}, {"t", "s", b}}); }

inline Spec chain3() {
  return build("chain3", {"u", "m", "w"}, "u", "w",
               {{"u", "m", 2.0}, {"m", "u", 1.0}, {"m", "w", 3.0}, {"w", "m", 0.5}});
}

/// Chain u-m-w with a dead-end tooth m-s.
inline Spec tooth() {
  return build("tooth", {"u", "m", "w", "s"}, "u", "w",
               {{"u", "m", 1.5}, {"m", "u", 0.7}, {"m", "w", 2.0}, {"w", "m", 0.6}, {"m", "s", 1.2}, {"s", "m", 0.8}});
}

inline Spec diamond() {
  return build("diamond", {"u", "x", "y", "w"}, "u", "w",
               {{"u", "x", 2.0}, {"x", "u", 0.5}, {"x", "w", 1.5}, {"w", "x", 0.7},
                {"u", "y", 1.0}, {"y", "u", 0.9}, {"y", "w", 3.0}, {"w", "y", 0.4}});
}

/// One-way cycle a->c->u, and a direct sink->source edge.
inline Spec mixed5() {
  return build("mixed5", {"u", "a", "b", "c", "w"}, "u", "w",
               {{"u", "a", 1.0}, {"a", "u", 0.5}, {"a", "b", 2.0}, {"b", "a", 0.3}, {"b", "w", 1.5},
                {"w", "b", 0.4}, {"a", "c", 0.8}, {"c", "u", 1.1}, {"w", "u", 0.6}});
}

inline std::vector<Spec> all_graphs() { return {two_vertex(4.0, 1.0), chain3(), tooth(), diamond(), mixed5()}; }

/// Same support, rates drawn uniformly from [lo, hi].
inline Spec redraw(const Spec& s, std::mt19937_64& rng, double lo = 0.1, double hi = 10.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Spec out = s;
  for (const auto& e : out.graph.edges) out.rates[e] = u(rng);
  return out;
}

/// Random strongly connected cell: a directed ring through every vertex plus
/// extra random edges; reverse edges with probability `reverse_p`.
inline Spec random_graph(std::mt19937_64& rng, int n, double extra_p = 0.3, double reverse_p = 1.0) {
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back("v" + std::to_string(i));
  std::uniform_real_distribution<double> u01(0.0, 1.0), rate(0.2, 5.0);
  std::vector<std::tuple<std::string, std::string, double>> edges;
  std::vector<std::vector<char>> has(static_cast<std::size_t>(n), std::vector<char>(static_cast<std::size_t>(n), 0));
  auto add = [&](int a, int b) {
    if (a == b || has[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]) return;
    has[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = 1;
    edges.emplace_back(names[static_cast<std::size_t>(a)], names[static_cast<std::size_t>(b)], rate(rng));
  };
  for (int i = 0; i < n; ++i) {
    add(i, (i + 1) % n);
    if (u01(rng) < reverse_p) add((i + 1) % n, i);
  }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (a != b && u01(rng) < extra_p) {
        add(a, b);
        if (u01(rng) < reverse_p) add(b, a);
      }
  return build("random" + std::to_string(n), names, "v0", names[static_cast<std::size_t>(n / 2)], edges);
}

}  // namespace fixtures
