#include "geoplan/solvers/min_norm_point.hpp"

#include <Eigen/Dense>
#include <limits>
#include <vector>

namespace geoplan::solvers {

namespace {

// Minimizer of |V_S v|^2 over the affine hull (1'v = 1, v free), via the KKT
// system; a complete orthogonal decomposition keeps degenerate vertex sets
// well-defined.
Eigen::VectorXd affine_minimizer(const Eigen::MatrixXd& P) {
  const int k = static_cast<int>(P.cols());
  Eigen::MatrixXd kkt(k + 1, k + 1);
  kkt.topLeftCorner(k, k) = P.transpose() * P;
  kkt.topRightCorner(k, 1).setOnes();
  kkt.bottomLeftCorner(1, k).setOnes();
  kkt(k, k) = 0.0;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k + 1);
  rhs[k] = 1.0;
  Eigen::VectorXd sol =
      kkt.completeOrthogonalDecomposition().solve(rhs);
  return sol.head(k);
}

}  // namespace

MinNormResult min_norm_point(const Eigen::MatrixXd& V, double tol) {
  const int d = static_cast<int>(V.rows());
  const int m = static_cast<int>(V.cols());
  MinNormResult res;
  res.weights = Eigen::VectorXd::Zero(m);
  if (m == 0) {
    res.point = Eigen::VectorXd::Zero(d);
    return res;
  }

  // Start from the column of smallest norm.
  int first = 0;
  double best = V.col(0).squaredNorm();
  for (int j = 1; j < m; ++j) {
    const double n = V.col(j).squaredNorm();
    if (n < best) {
      best = n;
      first = j;
    }
  }
  std::vector<int> support = {first};
  Eigen::VectorXd w = Eigen::VectorXd::Ones(1);
  Eigen::VectorXd x = V.col(first);

  const double scale = std::max(1.0, V.cwiseAbs().maxCoeff());
  const double eps = tol * scale * scale;

  for (int major = 0; major < 64 + 16 * m; ++major) {
    // Wolfe optimality check: min_j x'p_j >= x'x - eps.
    int enter = -1;
    double min_ip = std::numeric_limits<double>::infinity();
    for (int j = 0; j < m; ++j) {
      const double ip = x.dot(V.col(j));
      if (ip < min_ip) {
        min_ip = ip;
        enter = j;
      }
    }
    if (min_ip >= x.squaredNorm() - eps) break;
    bool already = false;
    for (int idx : support) {
      if (idx == enter) {
        already = true;
        break;
      }
    }
    if (already) break;  // numerical stall
    support.push_back(enter);
    w.conservativeResize(support.size());
    w[w.size() - 1] = 0.0;

    // Minor cycle: pull the affine minimizer back into the simplex.
    for (int minor = 0; minor < 2 * m + 16; ++minor) {
      Eigen::MatrixXd P(d, support.size());
      for (size_t i = 0; i < support.size(); ++i) P.col(i) = V.col(support[i]);
      const Eigen::VectorXd v = affine_minimizer(P);
      if (v.minCoeff() > 1e-13) {
        w = v;
        x = P * w;
        break;
      }
      double theta = 1.0;
      for (int i = 0; i < v.size(); ++i) {
        if (v[i] <= 1e-13 && w[i] > v[i]) {
          theta = std::min(theta, w[i] / (w[i] - v[i]));
        }
      }
      w = (1.0 - theta) * w + theta * v;
      // Drop zeroed columns.
      std::vector<int> keep_support;
      std::vector<double> keep_w;
      for (int i = 0; i < w.size(); ++i) {
        if (w[i] > 1e-13) {
          keep_support.push_back(support[i]);
          keep_w.push_back(w[i]);
        }
      }
      if (keep_support.empty()) {
        keep_support.push_back(support[0]);
        keep_w.push_back(1.0);
      }
      support = std::move(keep_support);
      w = Eigen::Map<Eigen::VectorXd>(keep_w.data(), keep_w.size());
      Eigen::MatrixXd Pk(d, support.size());
      for (size_t i = 0; i < support.size(); ++i)
        Pk.col(i) = V.col(support[i]);
      x = Pk * w;
    }
  }

  res.point = x;
  for (size_t i = 0; i < support.size(); ++i) res.weights[support[i]] = w[i];
  const double wsum = res.weights.sum();
  if (wsum > 0) res.weights /= wsum;
  res.distance = x.norm();
  return res;
}

MinNormResult closest_point_in_hull(const Eigen::MatrixXd& V,
                                    const Eigen::VectorXd& y, double tol) {
  Eigen::MatrixXd shifted = V.colwise() - y;
  MinNormResult res = min_norm_point(shifted, tol);
  res.point += y;
  return res;
}

}  // namespace geoplan::solvers
