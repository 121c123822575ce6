#pragma once

#include <Eigen/Core>
#include <optional>
#include <random>
#include <vector>

namespace geoplan {

/// H-representation {x : A x <= b}.  Rows are facet normals.
struct Polytope {
  Eigen::MatrixXd A;
  Eigen::VectorXd b;

  static Polytope axis_box(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi);
  static Polytope intersection(const Polytope& p, const Polytope& q);

  int dim() const { return static_cast<int>(A.cols()); }
  int rows() const { return static_cast<int>(A.rows()); }

  /// Translate the set by t: {x + t : x in P}.
  Polytope shifted(const Eigen::VectorXd& t) const;

  bool contains(const Eigen::VectorXd& x, double tol) const;
  /// max_i (a_i'x - b_i); negative inside, positive outside.
  double max_violation(const Eigen::VectorXd& x) const;

  /// Rejects NaN/inf entries and rows with norm below 1e-12.
  void validate() const;
};

struct ChebyshevBall {
  Eigen::VectorXd center;
  double radius = -1.0;  // negative: empty polytope
  bool feasible() const { return radius >= 0.0; }
};

/// Largest inscribed ball (LP).  radius 0 means the set is nonempty but has
/// empty interior.
ChebyshevBall chebyshev_center(const Polytope& p);

/// max d'x over the polytope; +inf if unbounded in that direction,
/// quiet NaN if empty.
double support_value(const Polytope& p, const Eigen::VectorXd& d);

/// Nonempty test via LP feasibility; returns the Chebyshev center as witness.
std::optional<Eigen::VectorXd> feasible_point(const Polytope& p);

/// Uniform samples from a bounded polytope.  Rejection from the bounding box
/// when acceptance is reasonable, hit-and-run otherwise; collapses to the
/// Chebyshev center for sets with (numerically) empty interior.
/// Deterministic for a fixed engine state.
class PolytopeSampler {
 public:
  PolytopeSampler(const Polytope& p, const Eigen::VectorXd& box_lo,
                  const Eigen::VectorXd& box_hi);

  Eigen::VectorXd sample(std::mt19937_64& rng);

 private:
  Eigen::VectorXd hit_and_run(std::mt19937_64& rng);

  const Polytope poly_;
  Eigen::VectorXd lo_, hi_;
  Eigen::VectorXd state_;
  double radius_ = 0.0;
  bool degenerate_ = false;
  bool use_rejection_ = true;
  int rejection_failures_ = 0;
};

/// Vertices of a bounded 2-D polytope as a CCW polygon (empty if the set is
/// empty or lower-dimensional).  Used by the SVG renderer.
std::vector<Eigen::Vector2d> polygon_vertices_2d(const Polytope& p);

}  // namespace geoplan
