#include "systolic/lp.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace systolic {

namespace {

class Tableau {
public:
  Tableau(const Eigen::MatrixXd &a, const Eigen::VectorXd &b, double tol)
      : m_(a.rows()), n_(a.cols()), tol_(tol), t_(Eigen::MatrixXd::Zero(a.rows(), a.cols() + a.rows() + 1)),
        sign_(a.rows()), basis_(a.rows()) {
    for (Eigen::Index i = 0; i < m_; ++i) {
      sign_(i) = b(i) < 0 ? -1.0 : 1.0;
      t_.row(i).head(n_) = sign_(i) * a.row(i);
      t_(i, n_ + i) = 1.0;
      t_(i, n_ + m_) = sign_(i) * b(i);
      basis_[i] = n_ + i;
    }
  }

  // Runs the simplex method for `cost` (length n + m) over columns < `allowed`.
  LpStatus optimize(const Eigen::VectorXd &cost, Eigen::Index allowed) {
    Eigen::RowVectorXd z = Eigen::RowVectorXd::Zero(t_.cols());
    z.head(cost.size()) = cost.transpose();
    for (Eigen::Index i = 0; i < m_; ++i) z -= cost(basis_[i]) * t_.row(i);
    int degenerate = 0;
    const long long limit = 50000 + 200 * (n_ + m_);
    for (long long iter = 0; iter < limit; ++iter) {
      const bool bland = degenerate > 50;
      Eigen::Index enter = -1;
      double best = -tol_;
      for (Eigen::Index j = 0; j < allowed; ++j) {
        if (z(j) < best) {
          enter = j;
          if (bland) break;
          best = z(j);
        }
      }
      if (enter < 0) return LpStatus::Optimal;
      Eigen::Index leave = -1;
      double ratio = std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < m_; ++i) {
        const double p = t_(i, enter);
        if (p <= tol_) continue;
        const double r = t_(i, n_ + m_) / p;
        if (r < ratio - tol_ || (std::abs(r - ratio) <= tol_ && basis_[i] < basis_[leave])) {
          ratio = r;
          leave = i;
        }
      }
      if (leave < 0) return LpStatus::Unbounded;
      degenerate = ratio <= tol_ ? degenerate + 1 : 0;
      pivot(leave, enter, z);
    }
    return LpStatus::IterationLimit;
  }

  void pivot(Eigen::Index r, Eigen::Index c, Eigen::RowVectorXd &z) {
    t_.row(r) /= t_(r, c);
    for (Eigen::Index i = 0; i < m_; ++i)
      if (i != r && t_(i, c) != 0.0) t_.row(i) -= t_(i, c) * t_.row(r);
    if (z(c) != 0.0) z -= z(c) * t_.row(r);
    basis_[r] = c;
  }

  // Pivots basic artificials out wherever a structural column allows it.
  void expel_artificials() {
    Eigen::RowVectorXd dummy = Eigen::RowVectorXd::Zero(t_.cols());
    for (Eigen::Index i = 0; i < m_; ++i) {
      if (basis_[i] < n_) continue;
      Eigen::Index best = -1;
      double mag = tol_ * 1e3;
      for (Eigen::Index j = 0; j < n_; ++j)
        if (std::abs(t_(i, j)) > mag) {
          mag = std::abs(t_(i, j));
          best = j;
        }
      if (best >= 0) pivot(i, best, dummy);
    }
  }

  Eigen::VectorXd primal() const {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n_);
    for (Eigen::Index i = 0; i < m_; ++i)
      if (basis_[i] < n_) x(basis_[i]) = t_(i, n_ + m_);
    return x;
  }

  double artificial_sum() const {
    double s = 0.0;
    for (Eigen::Index i = 0; i < m_; ++i)
      if (basis_[i] >= n_) s += t_(i, n_ + m_);
    return s;
  }

  // y = S (c_B^T B^{-1}); B^{-1} sits in the artificial columns.
  Eigen::VectorXd duals(const Eigen::VectorXd &c) const {
    Eigen::RowVectorXd cb(m_);
    for (Eigen::Index i = 0; i < m_; ++i) cb(i) = basis_[i] < n_ ? c(basis_[i]) : 0.0;
    const Eigen::RowVectorXd y = cb * t_.middleCols(n_, m_);
    return (y.transpose().array() * sign_.array()).matrix();
  }

private:
  Eigen::Index m_, n_;
  double tol_;
  Eigen::MatrixXd t_;
  Eigen::VectorXd sign_;
  std::vector<Eigen::Index> basis_;
};

} // namespace

LpResult solve_lp(const Eigen::MatrixXd &a, const Eigen::VectorXd &b, const Eigen::VectorXd &c, double tol) {
  if (a.rows() != b.size() || a.cols() != c.size()) throw std::invalid_argument("solve_lp: dimension mismatch");
  const Eigen::Index m = a.rows(), n = a.cols();
  LpResult out;
  Tableau t(a, b, tol);
  Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(n + m);
  phase1.tail(m).setOnes();
  const auto s1 = t.optimize(phase1, n);
  if (s1 == LpStatus::IterationLimit) {
    out.status = s1;
    return out;
  }
  const double scale = 1.0 + b.lpNorm<Eigen::Infinity>();
  if (t.artificial_sum() > 1e-8 * scale) {
    out.status = LpStatus::Infeasible;
    return out;
  }
  t.expel_artificials();
  Eigen::VectorXd phase2 = Eigen::VectorXd::Zero(n + m);
  phase2.head(n) = c;
  out.status = t.optimize(phase2, n);
  if (out.status != LpStatus::Optimal) return out;
  out.x = t.primal();
  out.y = t.duals(c);
  out.objective = c.dot(out.x);
  return out;
}

} // namespace systolic
