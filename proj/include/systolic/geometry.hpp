#pragma once

#include "systolic/complex.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace systolic {

/// Squared pairwise distances between the vertices of the k-simplex i.
inline Eigen::MatrixXd squared_distances(const SimplicialComplex &x, const PLMetric &g, int k, int i) {
  const auto &s = x.simplex(k, i);
  Eigen::MatrixXd d2 = Eigen::MatrixXd::Zero(k + 1, k + 1);
  for (int a = 0; a <= k; ++a)
    for (int b = a + 1; b <= k; ++b) {
      const double l = g(x.edge(s[a], s[b]));
      d2(a, b) = d2(b, a) = l * l;
    }
  return d2;
}

/// Gram matrix of the edge vectors v_i - v_0 from squared distances.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>
gram_from_squared_distances(const Eigen::MatrixBase<Derived> &d2) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index k = d2.rows() - 1;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> gram(k, k);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j) gram(i, j) = (d2(0, i + 1) + d2(0, j + 1) - d2(i + 1, j + 1)) / Scalar(2);
  return gram;
}

/// k-volume sqrt(det G) / k!, zero when the simplex is degenerate.
template <typename Derived> typename Derived::Scalar simplex_volume(const Eigen::MatrixBase<Derived> &d2) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index k = d2.rows() - 1;
  if (k == 0) return Scalar(1);
  const Scalar det = gram_from_squared_distances(d2).determinant();
  Scalar fact = 1;
  for (Eigen::Index i = 2; i <= k; ++i) fact *= Scalar(i);
  using std::sqrt;
  return det > Scalar(0) ? sqrt(det) / fact : Scalar(0);
}

/// Whether the squared distances are realised by a nondegenerate Euclidean
/// simplex (Gram matrix positive definite relative to its scale).
template <typename Derived> bool is_nondegenerate(const Eigen::MatrixBase<Derived> &d2, double rel_tol = 1e-12) {
  const Eigen::Index k = d2.rows() - 1;
  if (k == 0) return true;
  const auto gram = gram_from_squared_distances(d2);
  Eigen::LLT<Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>> llt(gram);
  if (llt.info() != Eigen::Success) return false;
  const double scale = gram.diagonal().maxCoeff();
  const auto l = llt.matrixL();
  for (Eigen::Index i = 0; i < k; ++i)
    if (!(l(i, i) * l(i, i) > rel_tol * scale)) return false;
  return true;
}

/// Vertex coordinates in R^k (row a = vertex a, vertex 0 at the origin)
/// realising the squared distances.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>
simplex_embedding(const Eigen::MatrixBase<Derived> &d2) {
  using Mat = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Eigen::Index k = d2.rows() - 1;
  Mat coords = Mat::Zero(k + 1, k);
  if (k == 0) return coords;
  Eigen::LLT<Mat> llt(gram_from_squared_distances(d2));
  coords.bottomRows(k) = llt.matrixL();
  return coords;
}

inline double simplex_volume(const SimplicialComplex &x, const PLMetric &g, int k, int i) {
  return simplex_volume(squared_distances(x, g, k, i));
}

} // namespace systolic
