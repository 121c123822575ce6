#include "geoplan/solvers/linprog.hpp"

#include <cmath>
#include <vector>

namespace geoplan::solvers {

namespace {

constexpr double kPivotTol = 1e-11;
constexpr double kFeasTol = 1e-9;

// Dense tableau simplex over equality-standard form
//   min f'y  s.t.  T y = rhs,  y >= 0
// where the tableau rows carry [T | rhs] and `basis` maps rows to basic
// columns.  Dantzig pricing, switching to Bland's rule after a pivot budget
// to rule out cycling.
class Tableau {
 public:
  Tableau(Eigen::MatrixXd tab, std::vector<int> basis, int num_cols)
      : tab_(std::move(tab)), basis_(std::move(basis)), cols_(num_cols) {}

  // Returns false on unboundedness.
  bool run(const Eigen::VectorXd& cost, int restrict_cols) {
    const int m = static_cast<int>(tab_.rows());
    // Reduced-cost row tracked explicitly.
    Eigen::VectorXd red = cost;
    double obj = 0.0;
    for (int r = 0; r < m; ++r) {
      if (cost[basis_[r]] != 0.0) {
        red -= cost[basis_[r]] * tab_.row(r).head(cols_).transpose();
        obj -= cost[basis_[r]] * tab_(r, cols_);
      }
    }
    const long budget = 50L * (m + restrict_cols) + 1000;
    long pivots = 0;
    while (true) {
      int enter = -1;
      if (pivots < budget) {
        double best = -kPivotTol;
        for (int j = 0; j < restrict_cols; ++j) {
          if (red[j] < best) {
            best = red[j];
            enter = j;
          }
        }
      } else {  // Bland
        for (int j = 0; j < restrict_cols; ++j) {
          if (red[j] < -kPivotTol) {
            enter = j;
            break;
          }
        }
      }
      if (enter < 0) break;

      int leave = -1;
      double best_ratio = 0.0;
      for (int r = 0; r < m; ++r) {
        const double a = tab_(r, enter);
        if (a > kPivotTol) {
          const double ratio = tab_(r, cols_) / a;
          if (leave < 0 || ratio < best_ratio - kPivotTol ||
              (ratio < best_ratio + kPivotTol && basis_[r] < basis_[leave])) {
            leave = r;
            best_ratio = ratio;
          }
        }
      }
      if (leave < 0) return false;  // unbounded

      pivot(leave, enter);
      // Update reduced costs.
      const double re = red[enter];
      if (re != 0.0) {
        red -= re * tab_.row(leave).head(cols_).transpose();
        obj -= re * tab_(leave, cols_);
        red[enter] = 0.0;
      }
      ++pivots;
    }
    objective_ = -obj;  // obj accumulated as -c_B' x_B
    return true;
  }

  void pivot(int row, int col) {
    tab_.row(row) /= tab_(row, col);
    for (int r = 0; r < tab_.rows(); ++r) {
      if (r == row) continue;
      const double f = tab_(r, col);
      if (f != 0.0) tab_.row(r) -= f * tab_.row(row);
    }
    basis_[row] = col;
  }

  const std::vector<int>& basis() const { return basis_; }
  const Eigen::MatrixXd& tab() const { return tab_; }
  double objective() const { return objective_; }

 private:
  Eigen::MatrixXd tab_;
  std::vector<int> basis_;
  int cols_;
  double objective_ = 0.0;
};

}  // namespace

LpResult solve_lp(const Eigen::VectorXd& c, const Eigen::MatrixXd& A,
                  const Eigen::VectorXd& b) {
  const int m = static_cast<int>(A.rows());
  const int n = static_cast<int>(A.cols());

  // Columns: u (n), v (n) with x = u - v, slack (m), artificial (m).
  const int nu = n, nv = n;
  const int cols = nu + nv + m + m;
  Eigen::MatrixXd tab = Eigen::MatrixXd::Zero(m, cols + 1);
  for (int i = 0; i < m; ++i) {
    const double sign = (b[i] >= 0.0) ? 1.0 : -1.0;
    tab.block(i, 0, 1, n) = sign * A.row(i);
    tab.block(i, n, 1, n) = -sign * A.row(i);
    tab(i, nu + nv + i) = sign;       // slack
    tab(i, nu + nv + m + i) = 1.0;    // artificial
    tab(i, cols) = sign * b[i];
  }
  std::vector<int> basis(m);
  for (int i = 0; i < m; ++i) basis[i] = nu + nv + m + i;

  Tableau t(std::move(tab), std::move(basis), cols);

  // Phase 1: minimize the artificial sum.
  Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(cols);
  phase1.tail(m).setOnes();
  if (!t.run(phase1, cols)) {
    return {LpStatus::Infeasible, Eigen::VectorXd(), 0.0};
  }
  if (t.objective() > kFeasTol * (1.0 + b.cwiseAbs().maxCoeff())) {
    return {LpStatus::Infeasible, Eigen::VectorXd(), 0.0};
  }
  // Drive remaining artificials out of the basis where possible.
  for (int r = 0; r < m; ++r) {
    if (t.basis()[r] >= nu + nv + m) {
      for (int j = 0; j < nu + nv + m; ++j) {
        if (std::abs(t.tab()(r, j)) > 1e-8) {
          t.pivot(r, j);
          break;
        }
      }
    }
  }

  // Phase 2: minimize -c'(u - v); artificial columns are frozen out.
  Eigen::VectorXd phase2 = Eigen::VectorXd::Zero(cols);
  phase2.head(n) = -c;
  phase2.segment(n, n) = c;
  if (!t.run(phase2, nu + nv + m)) {
    return {LpStatus::Unbounded, Eigen::VectorXd(), 0.0};
  }

  Eigen::VectorXd y = Eigen::VectorXd::Zero(cols);
  for (int r = 0; r < m; ++r) {
    y[t.basis()[r]] = t.tab()(r, cols);
  }
  LpResult res;
  res.status = LpStatus::Optimal;
  res.x = y.head(n) - y.segment(n, n);
  res.objective = c.dot(res.x);
  return res;
}

}  // namespace geoplan::solvers
