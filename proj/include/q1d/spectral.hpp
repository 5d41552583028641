#pragma once

#include "q1d/graph_model.hpp"
#include "q1d/linalg.hpp"
#include "q1d/ratefn.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <span>
#include <vector>

namespace q1d {

/// Row/column labels of the tilted matrix: the cell vertices except the sink,
/// in cell order.
std::vector<int> tilted_labels(const Cell& cell);

/// Tilted generator of the cell-projected walk. Entry (v, w) collects the
/// rate of w -> v, weighted by e^{lambda} when the jump moves one cell up and
/// e^{-lambda} when it moves one cell down, with -r(v) on the diagonal.
/// Cross-cell jumps between consecutive gates land on the gate diagonal.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> tilted_generator(const Cell& cell, Scalar lambda) {
  using std::exp;
  const std::vector<int> labels = tilted_labels(cell);
  const auto n = static_cast<Eigen::Index>(labels.size());
  const int src = cell.source();
  const int snk = cell.sink();
  const Scalar up = exp(lambda);
  const Scalar down = exp(-lambda);
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> a(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const int v = labels[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < n; ++j) {
      const int w = labels[static_cast<std::size_t>(j)];
      Scalar entry(0);
      if (v == w) entry -= Scalar(cell.exit_rate(v));
      if (v != w) entry += Scalar(cell.rate(w, v));
      if (v == src) entry += up * Scalar(cell.rate(w, snk));
      if (w == src) entry += down * Scalar(cell.rate(snk, v));
      a(i, j) = entry;
    }
  }
  return a;
}

/// d/dlambda of tilted_generator.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> tilted_generator_slope(const Cell& cell, Scalar lambda) {
  using std::exp;
  const std::vector<int> labels = tilted_labels(cell);
  const auto n = static_cast<Eigen::Index>(labels.size());
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> d =
      Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const int v = labels[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < n; ++j) {
      const int w = labels[static_cast<std::size_t>(j)];
      if (v == cell.source()) d(i, j) += exp(lambda) * Scalar(cell.rate(w, cell.sink()));
      if (w == cell.source()) d(i, j) -= exp(-lambda) * Scalar(cell.rate(cell.sink(), v));
    }
  }
  return d;
}

struct TiltedMatrix {
  Eigen::MatrixXd a;
  double lambda = 0.0;
  /// Largest lattice exit rate; a + kappa I is entrywise nonnegative.
  double kappa = 0.0;
  std::vector<int> labels;
};

TiltedMatrix build_tilted_matrix(const Cell& cell, double lambda);

/// Scaled cumulant generating function of the position and its derivative,
/// with the Perron data used to compute them.
struct ScgfPoint {
  double value = 0.0;
  double slope = 0.0;
  Eigen::VectorXd right;
  Eigen::VectorXd left;
  double residual = 0.0;
  bool dense_fallback = false;
};

ScgfPoint scgf_point(const Cell& cell, double lambda);
double scgf(const Cell& cell, double lambda);
double scgf_slope(const Cell& cell, double lambda);

/// Legendre transform of the scgf at theta; +inf if theta is out of range of
/// the slope.
ExtReal position_rate_spectral(const Cell& cell, double theta);
RateCurve spectral_rate_curve(const Cell& cell, std::span<const double> grid);

}  // namespace q1d
