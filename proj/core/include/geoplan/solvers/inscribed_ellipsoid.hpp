#pragma once

#include <Eigen/Core>

namespace geoplan::solvers {

struct Ellipsoid {
  Eigen::MatrixXd B;  // symmetric positive definite shape matrix
  Eigen::VectorXd d;  // center
  double log_det_B = 0.0;

  /// Euclidean volume = unit_ball_volume(dim) * det(B).
  double volume() const;
};

struct EllipsoidOptions {
  double gap_tol = 1e-7;   // barrier duality-gap target (log-volume units)
  int max_newton = 200;
  double t_init = 1.0;
  double t_scale = 20.0;
};

/// Maximum-volume ellipsoid {B u + d : |u| <= 1} inscribed in {A x <= b}.
/// Solved as max log det B subject to |B a_i| + a_i'd <= b_i via a
/// log-barrier Newton path.  The polytope must be bounded with nonempty
/// interior; returns an invalid ellipsoid (log_det_B = -inf) otherwise.
Ellipsoid max_volume_inscribed_ellipsoid(const Eigen::MatrixXd& A,
                                         const Eigen::VectorXd& b,
                                         const EllipsoidOptions& opts = {});

}  // namespace geoplan::solvers
