#pragma once

#include <Eigen/Core>

namespace geoplan::solvers {

struct MinNormResult {
  Eigen::VectorXd point;    // closest point in the hull
  Eigen::VectorXd weights;  // convex-combination weights over the columns
  double distance = 0.0;
};

/// Closest point to the origin in conv(columns of V), Wolfe's min-norm-point
/// algorithm.  Terminates at the Wolfe criterion x'p_j >= |x|^2 - tol for all
/// columns; handles degenerate (affinely dependent) vertex sets.
MinNormResult min_norm_point(const Eigen::MatrixXd& V, double tol = 1e-12);

/// Closest point in conv(columns of V) to y.
MinNormResult closest_point_in_hull(const Eigen::MatrixXd& V,
                                    const Eigen::VectorXd& y,
                                    double tol = 1e-12);

}  // namespace geoplan::solvers
