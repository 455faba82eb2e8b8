#pragma once

#include <Eigen/Dense>

namespace systolic {

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  double objective = 0.0;
  Eigen::VectorXd x; // primal solution
  Eigen::VectorXd y; // equality multipliers: A^T y <= c, b^T y = objective
};

/// min c^T x subject to A x = b, x >= 0. Dense two-phase tableau simplex
/// (Dantzig pricing with a switch to Bland's rule on long degenerate runs).
LpResult solve_lp(const Eigen::MatrixXd &a, const Eigen::VectorXd &b, const Eigen::VectorXd &c,
                  double tol = 1e-10);

} // namespace systolic
