#pragma once

#include <Eigen/Core>
#include <limits>
#include <vector>

#include "geoplan/errors.hpp"

namespace geoplan {

enum class FactorKind { Circle, Line };

/// One-dimensional factor of a flat product manifold: either a circle of
/// given circumference or a (possibly unbounded) real interval.
class Factor {
 public:
  static Factor circle(double circumference);
  static Factor line(double lo, double hi);
  static Factor line();  // unbounded

  FactorKind kind() const { return kind_; }
  bool is_circle() const { return kind_ == FactorKind::Circle; }
  double circumference() const { return circumference_; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  bool bounded() const;

  /// Radius below which metric balls stay geodesically convex: a ball of
  /// radius r on a circle is an arc of length 2r, convex iff 2r < c/2,
  /// so the radius is c/4.  Lines are convex everywhere.
  double convexity_radius() const;

 private:
  Factor() = default;
  FactorKind kind_ = FactorKind::Line;
  double circumference_ = 0.0;
  double lo_ = -std::numeric_limits<double>::infinity();
  double hi_ = std::numeric_limits<double>::infinity();
};

/// A point on the manifold in canonical coordinates: circle coordinates in
/// [0, c), line coordinates within bounds.  Built via
/// FlatManifold::canonicalize.
struct MPoint {
  Eigen::VectorXd coords;
};

/// Integer winding offsets, one per dimension (always zero on line
/// dimensions).  lift(p, k) shifts circle coordinate i by k_i * c_i.
struct Offset {
  Eigen::VectorXi k;

  static Offset zero(int dim) { return Offset{Eigen::VectorXi::Zero(dim)}; }
};

/// Ordered product of circle and line factors with the flat product metric.
/// Immutable after construction; all operations are pure.
class FlatManifold {
 public:
  explicit FlatManifold(std::vector<Factor> factors);

  int dim() const { return static_cast<int>(factors_.size()); }
  const Factor& factor(int i) const { return factors_.at(i); }
  const std::vector<Factor>& factors() const { return factors_; }

  std::vector<int> circle_dims() const;
  bool has_circles() const;

  /// Wraps circle coordinates into [0, c_i); line coordinates must already
  /// lie within bounds.
  MPoint canonicalize(const Eigen::VectorXd& raw) const;

  /// Per-dimension displacement from p to q along the minimizing geodesic:
  /// the representative of q_i - p_i in (-c_i/2, c_i/2] on circles, the
  /// plain difference on lines.  With strict=true an exact wrap tie (within
  /// 1e-12) raises AntipodalAmbiguity; otherwise the positive representative
  /// is returned.
  Eigen::VectorXd minimizing_delta(const MPoint& p, const MPoint& q,
                                   bool strict = false) const;

  double geodesic_distance(const MPoint& p, const MPoint& q) const;

  /// Point at parameter t on the unique minimizing geodesic from p to q.
  /// Raises AntipodalAmbiguity when some circle coordinate pair is an exact
  /// wrap tie, in which case the minimizing geodesic is not unique.
  MPoint geodesic_interpolate(const MPoint& p, const MPoint& q,
                              double t) const;

  /// Chart-coordinate representative of p shifted by k whole turns per
  /// circle dimension.
  Eigen::VectorXd lift(const MPoint& p, const Offset& k) const;

  /// Nearest integer winding that brings "lift(q, k) - from" closest to
  /// zero per circle dimension.  Used when reading chart coordinates back
  /// onto the manifold.
  Offset nearest_offset(const Eigen::VectorXd& from, const MPoint& q) const;

  /// Replaces circle factor i by the interval [cut, cut + c_i]; the
  /// joint-limits baseline that forbids wrapping through the cut.
  FlatManifold unroll_factor(int i, double cut) const;

 private:
  void check_dim(const Eigen::VectorXd& v, const char* what) const;
  std::vector<Factor> factors_;
};

}  // namespace geoplan
