#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>

namespace q1d {

template <typename Scalar>
struct PerronResult {
  Scalar root = Scalar(0);
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> vector;
  Scalar residual = Scalar(0);
  long iterations = 0;
  bool fallback = false;
};

/// Perron root and a positive eigenvector of an entrywise nonnegative square
/// matrix. Power iteration on B + I (the unit shift removes periodicity);
/// falls back to a dense eigensolver when the iteration does not converge.
template <typename Derived>
PerronResult<typename Derived::Scalar> perron(const Eigen::MatrixBase<Derived>& nonneg,
                                              typename Derived::Scalar tol = 1e-12,
                                              long max_iter = 1000000) {
  using Scalar = typename Derived::Scalar;
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Eigen::Index n = nonneg.rows();
  PerronResult<Scalar> out;
  if (n == 1) {
    out.root = nonneg(0, 0);
    out.vector = Vec::Ones(1);
    return out;
  }
  const Mat shifted = nonneg + Mat::Identity(n, n);
  const Scalar scale = std::max(Scalar(1), shifted.cwiseAbs().rowwise().sum().maxCoeff());

  Vec w = Vec::Constant(n, Scalar(1));
  Scalar mu = Scalar(0);
  for (long it = 1; it <= max_iter; ++it) {
    Vec next = shifted * w;
    mu = next.maxCoeff();
    next /= mu;
    w.swap(next);
    if (it % 8 == 0 || it == max_iter) {
      const Scalar res = (shifted * w - mu * w).cwiseAbs().maxCoeff();
      if (res < tol * scale) {
        const Vec bw = shifted * w;
        mu = w.dot(bw) / w.dot(w);
        out.root = mu - Scalar(1);
        out.vector = w;
        out.residual = (shifted * w - mu * w).cwiseAbs().maxCoeff();
        out.iterations = it;
        return out;
      }
    }
  }

  // Dense fallback: the eigenvalue of largest real part is the Perron root.
  Eigen::EigenSolver<Mat> es(Mat(nonneg), true);
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < n; ++i)
    if (es.eigenvalues()(i).real() > es.eigenvalues()(best).real()) best = i;
  out.root = es.eigenvalues()(best).real();
  Vec v = es.eigenvectors().col(best).real();
  if (v.sum() < Scalar(0)) v = -v;
  v /= v.cwiseAbs().maxCoeff();
  out.vector = v;
  out.residual = (Mat(nonneg) * v - out.root * v).cwiseAbs().maxCoeff();
  out.iterations = max_iter;
  out.fallback = true;
  return out;
}

/// Largest real part among the eigenvalues of a Metzler matrix (nonnegative
/// off the diagonal), via the Perron root of M + shift*I.
template <typename Derived>
typename Derived::Scalar metzler_abscissa(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  const Scalar shift = std::max(Scalar(0), -m.diagonal().minCoeff());
  using Plain = typename Derived::PlainObject;
  const Plain shifted = m + shift * Plain::Identity(m.rows(), m.cols());
  return perron(shifted).root - shift;
}

}  // namespace q1d
