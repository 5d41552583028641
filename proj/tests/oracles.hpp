#pragma once

// Reference computations written directly from the lattice definition, with
// no use of the library's move tables, linear solves or Perron code.

#include "fixtures.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace oracle {

/// A lattice site named by (cell vertex name, cell index), sinks already glued.
using Site = std::pair<std::string, long>;

/// Glue (sink, n) onto (source, n+1).
inline Site glue(const fixtures::Spec& s, const std::string& v, long n) {
  return v == s.graph.sink ? Site{s.graph.source, n + 1} : Site{v, n};
}

/// All lattice edges whose origin is `from`, obtained by copying every cell
/// edge into every cell in [from.cell - 1, from.cell + 1] and gluing.
inline std::map<Site, double> out_edges(const fixtures::Spec& s, const Site& from) {
  std::map<Site, double> out;
  for (long n = from.second - 1; n <= from.second + 1; ++n)
    for (const auto& e : s.graph.edges)
      if (glue(s, e.first, n) == from) out[glue(s, e.second, n)] += s.rates.at(e);
  return out;
}

/// Sites of cells lo..hi (gates of hi+1 excluded).
inline std::vector<Site> sites(const fixtures::Spec& s, long lo, long hi) {
  std::vector<Site> out;
  for (long n = lo; n <= hi; ++n)
    for (const auto& v : s.graph.vertices)
      if (v != s.graph.sink) out.emplace_back(v, n);
  return out;
}

/// E(e^{lambda tau}; gate hit) after leaving gate 0, hit among gates -1, 0, +1,
/// by a dense solve over the sites of cells -1 and 0.
struct TildeF {
  double minus, zero, plus;
};

inline TildeF tilde_f(const fixtures::Spec& s, double lambda) {
  const std::string& src = s.graph.source;
  std::vector<Site> interior;
  for (const Site& x : sites(s, -1, 0))
    if (x.first != src) interior.push_back(x);
  std::map<Site, int> idx;
  for (std::size_t i = 0; i < interior.size(); ++i) idx[interior[i]] = static_cast<int>(i);
  auto rate_out = [&](const Site& x) {
    double r = 0;
    for (const auto& [y, q] : out_edges(s, x)) r += q;
    return r;
  };
  const auto m = static_cast<Eigen::Index>(interior.size());
  // h_g(x) = E_x e^{lambda tau} 1(hit gate g first); holding factor r/(r - lambda).
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m, m);
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(m, 3);
  for (Eigen::Index i = 0; i < m; ++i) {
    const Site& x = interior[static_cast<std::size_t>(i)];
    const double r = rate_out(x);
    a(i, i) = r - lambda;
    for (const auto& [y, q] : out_edges(s, x)) {
      if (y.first == src) {
        b(i, y.second + 1) += q;
      } else {
        a(i, idx.at(y)) -= q;
      }
    }
  }
  const Eigen::MatrixXd h = m > 0 ? Eigen::MatrixXd(a.fullPivLu().solve(b)) : Eigen::MatrixXd(0, 3);
  const Site gate{src, 0};
  const double r = rate_out(gate);
  double res[3] = {0, 0, 0};
  for (const auto& [y, q] : out_edges(s, gate)) {
    for (int g = 0; g < 3; ++g) {
      if (y.first == src) {
        if (y.second + 1 == g) res[g] += q;
      } else {
        res[g] += q * h(idx.at(y), g);
      }
    }
  }
  const double hold = r / (r - lambda);
  return {hold * res[0] / r, hold * res[1] / r, hold * res[2] / r};
}

/// Cell-projected tilted generator built from the unfolded lattice: entry
/// (v, w) = sum over lattice jumps (w, 0) -> (v, n) of rate * e^{lambda n},
/// with -exit rate on the diagonal. Rows/columns: non-sink vertices in
/// declaration order.
inline Eigen::MatrixXd tilted(const fixtures::Spec& s, double lambda) {
  std::vector<std::string> labels;
  for (const auto& v : s.graph.vertices)
    if (v != s.graph.sink) labels.push_back(v);
  auto pos = [&](const std::string& v) {
    return static_cast<Eigen::Index>(std::find(labels.begin(), labels.end(), v) - labels.begin());
  };
  const auto n = static_cast<Eigen::Index>(labels.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (const auto& w : labels) {
    for (const auto& [y, q] : out_edges(s, {w, 0})) {
      a(pos(y.first), pos(w)) += q * std::exp(lambda * static_cast<double>(y.second));
      a(pos(w), pos(w)) -= q;
    }
  }
  return a;
}

/// Eigenvalue of largest real part, via Eigen's general eigensolver.
inline double dense_abscissa(const Eigen::MatrixXd& a) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(a, false);
  double best = -INFINITY;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) best = std::max(best, es.eigenvalues()[i].real());
  return best;
}

/// Simple source-to-sink paths by trying every ordered subset of the other
/// vertices.
inline std::set<std::vector<std::string>> gate_paths(const fixtures::Spec& s) {
  std::set<std::pair<std::string, std::string>> edges(s.graph.edges.begin(), s.graph.edges.end());
  std::vector<std::string> others;
  for (const auto& v : s.graph.vertices)
    if (v != s.graph.source && v != s.graph.sink) others.push_back(v);
  std::set<std::vector<std::string>> out;
  const std::size_t k = others.size();
  for (unsigned mask = 0; mask < (1u << k); ++mask) {
    std::vector<std::string> sub;
    for (std::size_t i = 0; i < k; ++i)
      if (mask & (1u << i)) sub.push_back(others[i]);
    std::sort(sub.begin(), sub.end());
    do {
      std::vector<std::string> p{s.graph.source};
      p.insert(p.end(), sub.begin(), sub.end());
      p.push_back(s.graph.sink);
      bool ok = true;
      for (std::size_t i = 0; i + 1 < p.size() && ok; ++i) ok = edges.count({p[i], p[i + 1]}) > 0;
      if (ok) out.insert(p);
    } while (std::next_permutation(sub.begin(), sub.end()));
  }
  return out;
}

/// sup over a dense lambda grid in [lo, hi) of lambda u - g(lambda), refined
/// by golden-section search around the best grid point.
inline double legendre(const std::function<double(double)>& g, double u, double lo, double hi, int points = 4000) {
  auto obj = [&](double l) { return l * u - g(l); };
  double best_l = lo, best = obj(lo);
  for (int i = 1; i < points; ++i) {
    const double l = lo + (hi - lo) * i / points;
    if (const double v = obj(l); v > best) best = v, best_l = l;
  }
  const double step = (hi - lo) / points;
  double a = std::max(lo, best_l - step), b = std::min(hi - 1e-15, best_l + step);
  const double gr = (std::sqrt(5.0) - 1) / 2;
  for (int it = 0; it < 200; ++it) {
    const double c = b - gr * (b - a), d = a + gr * (b - a);
    if (obj(c) > obj(d)) b = d;
    else a = c;
  }
  return std::max(best, obj((a + b) / 2));
}

/// Closed forms for the two-vertex birth-death cell with up-rate a, down-rate b.
struct BirthDeath {
  double a, b;
  double scgf(double l) const { return a * std::exp(l) + b * std::exp(-l) - a - b; }
  double rate(double theta) const {
    const double e = (theta + std::sqrt(theta * theta + 4 * a * b)) / (2 * a);
    return theta * std::log(e) - scgf(std::log(e));
  }
  double log_phi_plus(double l) const {
    const double x = a + b - l;
    return std::log(2 * a / (x + std::sqrt(x * x - 4 * a * b)));
  }
  double log_phi_minus(double l) const {
    const double x = a + b - l;
    return std::log(2 * b / (x + std::sqrt(x * x - 4 * a * b)));
  }
  double lambda_c() const { return (std::sqrt(a) - std::sqrt(b)) * (std::sqrt(a) - std::sqrt(b)); }
};

}  // namespace oracle
