#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <utility>

namespace systolic {

using IntVector = Eigen::Matrix<long long, Eigen::Dynamic, 1>;
using IntMatrix = Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>;

class SingularLatticeError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Full-rank lattice in R^b given by its basis rows.
class LatticeBasis {
public:
  LatticeBasis() = default;
  explicit LatticeBasis(Eigen::MatrixXd rows);

  /// Lattice with the given positive definite Gram matrix (basis = upper Cholesky factor).
  static LatticeBasis from_gram(const Eigen::MatrixXd &gram);

  int rank() const { return static_cast<int>(basis_.rows()); }
  const Eigen::MatrixXd &rows() const { return basis_; }
  Eigen::MatrixXd gram() const { return basis_ * basis_.transpose(); }
  double covolume() const { return std::abs(basis_.determinant()); }

  LatticeBasis scaled(double c) const { return LatticeBasis(c * basis_); }

private:
  Eigen::MatrixXd basis_;
};

// ---------------------------------------------------------------------------
// Gram-level kernels. Everything below works on a symmetric positive definite
// Gram matrix; integer coefficient vectors refer to the basis that produced it.
// ---------------------------------------------------------------------------

template <typename Scalar> struct GramReduction {
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> gram; // U G U^T
  IntMatrix transform;                                        // U, unimodular
};

namespace detail {

template <typename Scalar>
void gram_schmidt(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> &g,
                  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> &mu,
                  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> &bstar) {
  const Eigen::Index n = g.rows();
  mu.setZero(n, n);
  bstar.setZero(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < i; ++j) {
      Scalar s = g(i, j);
      for (Eigen::Index k = 0; k < j; ++k) s -= mu(j, k) * mu(i, k) * bstar(k);
      mu(i, j) = s / bstar(j);
    }
    Scalar s = g(i, i);
    for (Eigen::Index k = 0; k < i; ++k) s -= mu(i, k) * mu(i, k) * bstar(k);
    bstar(i) = s;
  }
}

} // namespace detail

/// LLL reduction of a Gram matrix (floating point, Lovasz parameter `delta`).
template <typename Derived>
GramReduction<typename Derived::Scalar> lll_reduce(const Eigen::MatrixBase<Derived> &gram,
                                                   typename Derived::Scalar delta = 0.99) {
  using Scalar = typename Derived::Scalar;
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  const Eigen::Index n = gram.rows();
  GramReduction<Scalar> out{gram, IntMatrix::Identity(n, n)};
  Mat &g = out.gram;
  IntMatrix &u = out.transform;
  Mat mu;
  Vec bstar;
  detail::gram_schmidt(g, mu, bstar);

  Eigen::Index k = 1;
  int guard = 0;
  while (k < n && guard++ < 100000) {
    for (Eigen::Index j = k - 1; j >= 0; --j) {
      const Scalar q = std::round(mu(k, j));
      if (q == Scalar(0)) continue;
      const auto qi = static_cast<long long>(q);
      g.row(k) -= q * g.row(j);
      g.col(k) -= q * g.col(j);
      u.row(k) -= qi * u.row(j);
      detail::gram_schmidt(g, mu, bstar);
    }
    if (bstar(k) >= (delta - mu(k, k - 1) * mu(k, k - 1)) * bstar(k - 1)) {
      ++k;
    } else {
      g.row(k).swap(g.row(k - 1));
      g.col(k).swap(g.col(k - 1));
      u.row(k).swap(u.row(k - 1));
      detail::gram_schmidt(g, mu, bstar);
      k = std::max<Eigen::Index>(k - 1, 1);
    }
  }
  return out;
}

namespace detail {

// Recursive Fincke-Pohst enumeration over the levels of an upper Cholesky
// factor. `radius2` may shrink during the walk when the visitor returns a
// smaller bound.
template <typename Scalar, typename Visitor> class Enumerator {
public:
  Enumerator(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> &r, Scalar radius2,
             bool half, Visitor &visit)
      : n_(r.rows()), mu_(r.rows(), r.rows()), b_(r.rows()), x_(IntVector::Zero(r.rows())),
        radius2_(radius2), half_(half), visit_(visit) {
    for (Eigen::Index i = 0; i < n_; ++i) {
      b_(i) = r(i, i) * r(i, i);
      for (Eigen::Index j = i + 1; j < n_; ++j) mu_(i, j) = r(i, j) / r(i, i);
    }
  }

  void run() {
    if (n_ > 0) level(n_ - 1, Scalar(0), true);
  }

private:
  void level(Eigen::Index i, Scalar partial, bool upper_zero) {
    Scalar c = 0;
    for (Eigen::Index j = i + 1; j < n_; ++j) c -= mu_(i, j) * static_cast<Scalar>(x_(j));
    const Scalar slack = radius2_ - partial;
    if (slack < Scalar(0)) return;
    const Scalar w = std::sqrt(slack / b_(i));
    long long lo = static_cast<long long>(std::ceil(c - w));
    const long long hi = static_cast<long long>(std::floor(c + w));
    if (half_ && upper_zero) lo = std::max(lo, 0LL);
    for (long long v = lo; v <= hi; ++v) {
      const Scalar d = static_cast<Scalar>(v) - c;
      const Scalar p = partial + b_(i) * d * d;
      if (p > radius2_) continue;
      x_(i) = v;
      if (i == 0) {
        if (!(upper_zero && v == 0)) {
          if (!(half_ && upper_zero && v < 0)) radius2_ = visit_(x_, p, radius2_);
        }
      } else {
        level(i - 1, p, upper_zero && v == 0);
      }
    }
    x_(i) = 0;
  }

  Eigen::Index n_;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> mu_;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> b_;
  IntVector x_;
  Scalar radius2_;
  bool half_;
  Visitor &visit_;
};

} // namespace detail

/// Calls `visit(coefficients, norm2)` for every nonzero integer vector x with
/// x^T G x <= radius2. With `half` set, only one of each pair {x, -x} is
/// visited. Coefficients are expressed in the basis that produced `gram`.
template <typename Derived, typename Visitor>
void for_each_short_vector(const Eigen::MatrixBase<Derived> &gram, typename Derived::Scalar radius2,
                           bool half, Visitor &&visit) {
  using Scalar = typename Derived::Scalar;
  const auto red = lll_reduce(gram);
  Eigen::LLT<Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>> llt(red.gram);
  if (llt.info() != Eigen::Success) throw SingularLatticeError("Gram matrix is not positive definite");
  const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> r = llt.matrixU();
  const IntMatrix ut = red.transform.transpose();
  auto adapter = [&](const IntVector &x, Scalar norm2, Scalar bound) {
    visit(IntVector(ut * x), norm2);
    return bound;
  };
  detail::Enumerator<Scalar, decltype(adapter)> e(r, radius2, half, adapter);
  e.run();
}

template <typename Scalar> struct ShortVector {
  Scalar norm2 = 0;
  IntVector coefficients;
};

/// Exact (enumeration-certified) shortest nonzero vector of the lattice with Gram `gram`.
template <typename Derived>
ShortVector<typename Derived::Scalar> shortest_vector(const Eigen::MatrixBase<Derived> &gram) {
  using Scalar = typename Derived::Scalar;
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const auto red = lll_reduce(gram);
  Eigen::LLT<Mat> llt(red.gram);
  if (llt.info() != Eigen::Success) throw SingularLatticeError("Gram matrix is not positive definite");
  const Mat r = llt.matrixU();

  ShortVector<Scalar> best;
  best.norm2 = red.gram(0, 0);
  IntVector best_red = IntVector::Zero(gram.rows());
  best_red(0) = 1;
  for (Eigen::Index i = 1; i < gram.rows(); ++i) {
    if (red.gram(i, i) < best.norm2) {
      best.norm2 = red.gram(i, i);
      best_red.setZero();
      best_red(i) = 1;
    }
  }
  const Scalar slack = Scalar(1) + Scalar(64) * Eigen::NumTraits<Scalar>::epsilon();
  auto visit = [&](const IntVector &x, Scalar norm2, Scalar bound) {
    if (norm2 < best.norm2) {
      best.norm2 = norm2;
      best_red = x;
      return norm2 * slack;
    }
    return bound;
  };
  detail::Enumerator<Scalar, decltype(visit)> e(r, best.norm2 * slack, true, visit);
  e.run();
  best.coefficients = red.transform.transpose() * best_red;
  return best;
}

template <typename Derived> typename Derived::Scalar lambda1_gram(const Eigen::MatrixBase<Derived> &gram) {
  using std::sqrt;
  return sqrt(shortest_vector(gram).norm2);
}

/// lambda1(L) * lambda1(L*) computed from the Gram matrix of L.
template <typename Derived>
typename Derived::Scalar berge_martinet_gram(const Eigen::MatrixBase<Derived> &gram) {
  using Mat = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Mat g = gram;
  const Mat dual = g.inverse();
  return lambda1_gram(g) * lambda1_gram(0.5 * (dual + dual.transpose()));
}

// ---------------------------------------------------------------------------
// Lattice operations.
// ---------------------------------------------------------------------------

/// Dual basis D with D * B^T = I.
LatticeBasis dual_lattice(const LatticeBasis &lattice);

double lambda1(const LatticeBasis &lattice);

/// Shortest nonzero lattice vector as coordinates in R^b.
Eigen::VectorXd shortest_lattice_vector(const LatticeBasis &lattice);

double berge_martinet_product(const LatticeBasis &lattice);

/// lambda1^2 / det(L)^(2/b).
double hermite_invariant(const LatticeBasis &lattice);

/// Rescales so that |det| = 1.
LatticeBasis normalize_covolume(const LatticeBasis &lattice);

/// Whether L* is similar to L by an orthogonal map (after covolume normalisation).
bool is_isodual(const LatticeBasis &lattice, double tol = 1e-9);

/// Known values of the Berge-Martinet constant for b <= 4.
std::optional<double> gamma_prime_table(int b);

struct DualCriticalResult {
  LatticeBasis lattice;
  double product = 0.0;
  long long accepted_moves = 0;
  int restarts = 0;
};

/// Random local search for lattices maximising lambda1(L) lambda1(L*) among
/// covolume-one lattices of rank b. Deterministic in `seed`.
DualCriticalResult dual_critical_search(int b, long long budget, std::uint64_t seed);

// Named lattices used throughout the tests and generators.
LatticeBasis integer_lattice(int b);
LatticeBasis hexagonal_lattice();
LatticeBasis fcc_lattice();

/// Plain-text format: "lattice b" followed by b rows of b numbers.
LatticeBasis read_lattice(std::istream &in);
void write_lattice(std::ostream &out, const LatticeBasis &lattice);

} // namespace systolic
