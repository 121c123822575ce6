#pragma once

#include <Eigen/Core>
#include <optional>
#include <string>
#include <vector>

#include "geoplan/manifold.hpp"
#include "geoplan/polytope.hpp"

namespace geoplan {

/// Convex obstacle given by hull vertices (columns), in canonical chart
/// coordinates.  Degenerate vertex sets (points, segments) are allowed.
struct ConvexObstacle {
  Eigen::MatrixXd vertices;  // d x m

  int dim() const { return static_cast<int>(vertices.rows()); }
  int count() const { return static_cast<int>(vertices.cols()); }
};

struct GrowParams {
  /// Clipping margin below the convexity radius; non-positive means the
  /// default 1e-3 * min circumference.
  double epsilon = -1.0;
  int max_iterations = 10;
  /// Relative inscribed-ellipsoid volume growth below which the alternation
  /// stops.
  double termination_growth = 0.02;
  /// Required clearance from obstacles (hyperplanes are shifted inward).
  double configuration_margin = 0.0;
  /// Use the largest inscribed ball instead of the inscribed ellipsoid for
  /// the alternation metric.
  bool chebyshev_ball = false;

  double resolved_epsilon(const FlatManifold& m) const;
};

/// Collision-free set in globally-aligned chart coordinates, clipped per
/// circle dimension to the convexity box around its seed.
struct Region {
  Polytope polytope;
  MPoint seed;
  Eigen::VectorXd box_lo;
  Eigen::VectorXd box_hi;
  std::string id;

  Polytope box() const { return Polytope::axis_box(box_lo, box_hi); }
};

/// Separating-hyperplane certificate: wrapped obstacle `obstacle` lies in
/// {x : a'x >= b} for the polytope row `row`; `closest` is the tangency
/// point that generated the plane.
struct SeparationCertificate {
  int obstacle = -1;
  int row = -1;
  Eigen::VectorXd closest;
};

struct GrowResult {
  Region region;
  std::vector<ConvexObstacle> wrapped_obstacles;
  std::vector<SeparationCertificate> certificates;
  int iterations = 0;
  double volume = 0.0;
};

struct GconvexReport {
  int violations = 0;
  double worst_excess = 0.0;
  int pairs = 0;
};

/// Axis-aligned box around the seed: [seed - r_i + eps, seed + r_i - eps]
/// per circle dimension (chart coordinates, may extend past the seam), the
/// factor bounds per line dimension.
void convexity_box_bounds(const MPoint& seed, const FlatManifold& m,
                          double epsilon, Eigen::VectorXd* lo,
                          Eigen::VectorXd* hi);
Polytope convexity_box(const MPoint& seed, const FlatManifold& m,
                       double epsilon);

/// Translated obstacle copies, offsets in {-1,0,1} per circle dimension,
/// kept iff the copy intersects the box.  Offsets beyond one turn cannot
/// intersect because box widths stay below half a circumference and obstacle
/// spans below a full one (checked, ObstacleTooLarge otherwise).
std::vector<ConvexObstacle> wrap_obstacles(
    const std::vector<ConvexObstacle>& obstacles, const Polytope& box,
    const FlatManifold& m);

/// Alternating inflation: tangent separating hyperplanes at the
/// ellipsoid-metric closest obstacle points, then the maximum-volume
/// inscribed ellipsoid of the clipped polytope, until relative volume growth
/// drops below the threshold.  The result contains the seed, stays inside
/// the convexity box, and excludes every wrapped obstacle.
GrowResult grow_region(const MPoint& seed,
                       const std::vector<ConvexObstacle>& obstacles,
                       const FlatManifold& m, const GrowParams& params = {},
                       const std::string& id = "");

/// Samples point pairs from the region, walks the minimizing geodesic
/// between them, and counts pairs whose geodesic leaves the region (chart
/// membership checked at 32 points per pair, tolerance 1e-9).  Report-only:
/// a correctly clipped region must come back with zero violations.
GconvexReport check_gconvex(const Region& region, const FlatManifold& m,
                            int n_samples, unsigned rng_seed);

/// Witness point of {x : A_u x <= b_u, A_v (x - t_k) <= b_v} with
/// t_k = k * circumference componentwise; empty when the regions do not
/// meet at this winding.
std::optional<Eigen::VectorXd> region_overlap(const Region& u,
                                              const Region& v,
                                              const Offset& k,
                                              const FlatManifold& m);

/// Euclidean distance from a point to the obstacle hull (0 inside).
double obstacle_distance(const ConvexObstacle& obs, const Eigen::VectorXd& x);

}  // namespace geoplan
