#pragma once

#include <Eigen/Core>

namespace geoplan::solvers {

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  Eigen::VectorXd x;
  double objective = 0.0;
};

/// Maximizes c'x subject to A x <= b over free variables.  Dense two-phase
/// simplex with a Bland anti-cycling fallback; intended for the small
/// geometric subproblems in this library (tens of rows, a handful of
/// variables).  Deterministic for fixed input ordering.
LpResult solve_lp(const Eigen::VectorXd& c, const Eigen::MatrixXd& A,
                  const Eigen::VectorXd& b);

}  // namespace geoplan::solvers
