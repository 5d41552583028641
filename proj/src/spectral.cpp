#include "q1d/spectral.hpp"

#include "q1d/errors.hpp"

#include <algorithm>
#include <limits>

namespace q1d {

std::vector<int> tilted_labels(const Cell& cell) {
  std::vector<int> labels;
  for (int v = 0; v < cell.size(); ++v)
    if (v != cell.sink()) labels.push_back(v);
  return labels;
}

TiltedMatrix build_tilted_matrix(const Cell& cell, double lambda) {
  TiltedMatrix t;
  t.a = tilted_generator<double>(cell, lambda);
  t.lambda = lambda;
  t.kappa = cell.max_exit_rate();
  t.labels = tilted_labels(cell);
  return t;
}

ScgfPoint scgf_point(const Cell& cell, double lambda) {
  const TiltedMatrix t = build_tilted_matrix(cell, lambda);
  const auto n = t.a.rows();
  const Eigen::MatrixXd shifted = t.a + t.kappa * Eigen::MatrixXd::Identity(n, n);
  const auto right = perron(shifted);
  const auto left = perron(Eigen::MatrixXd(shifted.transpose()));

  ScgfPoint p;
  p.value = right.root - t.kappa;
  p.right = right.vector;
  p.left = left.vector;
  p.residual = right.residual;
  p.dense_fallback = right.fallback || left.fallback;
  const Eigen::MatrixXd d = tilted_generator_slope<double>(cell, lambda);
  p.slope = p.left.dot(d * p.right) / p.left.dot(p.right);
  return p;
}

double scgf(const Cell& cell, double lambda) { return scgf_point(cell, lambda).value; }

double scgf_slope(const Cell& cell, double lambda) { return scgf_point(cell, lambda).slope; }

ExtReal position_rate_spectral(const Cell& cell, double theta) {
  // exp(+-lambda) overflows beyond this.
  constexpr double lambda_cap = 700.0;
  auto slope = [&](double l) { return scgf_slope(cell, l); };
  double lo = -1.0, hi = 1.0;
  while (slope(lo) > theta) {
    lo *= 2.0;
    if (lo < -lambda_cap) return ExtReal::infinity();
  }
  while (slope(hi) < theta) {
    hi *= 2.0;
    if (hi > lambda_cap) return ExtReal::infinity();
  }
  for (int it = 0; it < 300; ++it) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    (slope(mid) < theta ? lo : hi) = mid;
  }
  const double l = 0.5 * (lo + hi);
  return ExtReal::finite(std::max(0.0, theta * l - scgf(cell, l)));
}

RateCurve spectral_rate_curve(const Cell& cell, std::span<const double> grid) {
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw Error(ErrorCode::invalid_input, "rate_curve: grid must be strictly increasing");
  RateCurve c;
  c.grid.assign(grid.begin(), grid.end());
  c.kind = CurveKind::position;
  c.route = Route::spectral;
  c.law = "graph(" + std::to_string(cell.size()) + " vertices)";
  for (double x : grid) c.values.push_back(position_rate_spectral(cell, x));
  return c;
}

}  // namespace q1d
