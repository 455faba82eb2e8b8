#include "systolic/smith.hpp"

#include <cstdlib>
#include <stdexcept>

namespace systolic {

namespace {

long long checked_sub_mul(long long a, long long q, long long b) {
  long long prod = 0;
  long long out = 0;
  if (__builtin_mul_overflow(q, b, &prod) || __builtin_sub_overflow(a, prod, &out))
    throw std::overflow_error("Smith normal form: integer overflow");
  return out;
}

long long floor_div(long long a, long long b) {
  long long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

class Reducer {
public:
  Reducer(IntMatrix a, bool track) : a_(std::move(a)), track_(track) {
    if (track_) {
      u_ = IntMatrix::Identity(a_.rows(), a_.rows());
      uinv_ = IntMatrix::Identity(a_.rows(), a_.rows());
    }
  }

  SmithForm run() {
    const Eigen::Index m = a_.rows();
    const Eigen::Index n = a_.cols();
    SmithForm out;
    for (Eigen::Index t = 0; t < std::min(m, n); ++t) {
      Eigen::Index pi = -1, pj = -1;
      long long best = 0;
      for (Eigen::Index j = t; j < n; ++j)
        for (Eigen::Index i = t; i < m; ++i) {
          const long long v = std::llabs(a_(i, j));
          if (v != 0 && (best == 0 || v < best)) {
            best = v;
            pi = i;
            pj = j;
            if (best == 1) break;
          }
        }
      if (pi < 0) break;
      swap_rows(t, pi);
      swap_cols(t, pj);
      reduce_pivot(t);
      if (a_(t, t) < 0) negate_row(t);
      out.diagonal.push_back(a_(t, t));
    }
    if (track_) {
      out.left = std::move(u_);
      out.left_inverse = std::move(uinv_);
    }
    return out;
  }

private:
  void reduce_pivot(Eigen::Index t) {
    const Eigen::Index m = a_.rows();
    const Eigen::Index n = a_.cols();
    while (true) {
      bool clean = true;
      for (Eigen::Index i = t + 1; i < m; ++i) {
        if (a_(i, t) == 0) continue;
        add_row(i, t, -floor_div(a_(i, t), a_(t, t)));
        if (a_(i, t) != 0) clean = false;
      }
      for (Eigen::Index j = t + 1; j < n; ++j) {
        if (a_(t, j) == 0) continue;
        add_col(j, t, -floor_div(a_(t, j), a_(t, t)));
        if (a_(t, j) != 0) clean = false;
      }
      if (!clean) {
        // Move the smallest remainder in row/column t onto the pivot.
        Eigen::Index bi = t, bj = t;
        long long best = std::llabs(a_(t, t));
        for (Eigen::Index i = t + 1; i < m; ++i)
          if (a_(i, t) != 0 && std::llabs(a_(i, t)) < best) best = std::llabs(a_(i, t)), bi = i, bj = t;
        for (Eigen::Index j = t + 1; j < n; ++j)
          if (a_(t, j) != 0 && std::llabs(a_(t, j)) < best) best = std::llabs(a_(t, j)), bi = t, bj = j;
        swap_rows(t, bi);
        swap_cols(t, bj);
        continue;
      }
      // Divisibility of the remaining block by the pivot.
      bool divisible = true;
      for (Eigen::Index j = t + 1; j < n && divisible; ++j)
        for (Eigen::Index i = t + 1; i < m; ++i)
          if (a_(i, j) % a_(t, t) != 0) {
            add_row(t, i, 1);
            divisible = false;
            break;
          }
      if (divisible) return;
    }
  }

  // row_i += q * row_k
  void add_row(Eigen::Index i, Eigen::Index k, long long q) {
    for (Eigen::Index j = 0; j < a_.cols(); ++j) a_(i, j) = checked_sub_mul(a_(i, j), -q, a_(k, j));
    if (!track_) return;
    for (Eigen::Index j = 0; j < u_.cols(); ++j) u_(i, j) = checked_sub_mul(u_(i, j), -q, u_(k, j));
    // Inverse transform: column_k -= q * column_i.
    for (Eigen::Index r = 0; r < uinv_.rows(); ++r) uinv_(r, k) = checked_sub_mul(uinv_(r, k), q, uinv_(r, i));
  }

  // col_j += q * col_k
  void add_col(Eigen::Index j, Eigen::Index k, long long q) {
    for (Eigen::Index i = 0; i < a_.rows(); ++i) a_(i, j) = checked_sub_mul(a_(i, j), -q, a_(i, k));
  }

  void swap_rows(Eigen::Index i, Eigen::Index k) {
    if (i == k) return;
    a_.row(i).swap(a_.row(k));
    if (!track_) return;
    u_.row(i).swap(u_.row(k));
    uinv_.col(i).swap(uinv_.col(k));
  }

  void swap_cols(Eigen::Index i, Eigen::Index k) {
    if (i != k) a_.col(i).swap(a_.col(k));
  }

  void negate_row(Eigen::Index i) {
    a_.row(i) *= -1;
    if (!track_) return;
    u_.row(i) *= -1;
    uinv_.col(i) *= -1;
  }

  IntMatrix a_;
  bool track_;
  IntMatrix u_, uinv_;
};

} // namespace

SmithForm smith_normal_form(IntMatrix a, bool track_left) { return Reducer(std::move(a), track_left).run(); }

} // namespace systolic
