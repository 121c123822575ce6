#include "geoplan/regions.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "geoplan/solvers/inscribed_ellipsoid.hpp"
#include "geoplan/solvers/linprog.hpp"
#include "geoplan/solvers/min_norm_point.hpp"

namespace geoplan {

namespace {

constexpr double kMembershipTol = 1e-9;

// Offset vectors in {-1,0,1}^(circle dims), zero elsewhere, in
// lexicographic order.
std::vector<Eigen::VectorXd> circle_offset_translations(const FlatManifold& m) {
  const std::vector<int> circles = m.circle_dims();
  const int nc = static_cast<int>(circles.size());
  std::vector<Eigen::VectorXd> out;
  const int total = 1;
  int combos = 1;
  for (int i = 0; i < nc; ++i) combos *= 3;
  (void)total;
  for (int code = 0; code < combos; ++code) {
    Eigen::VectorXd t = Eigen::VectorXd::Zero(m.dim());
    int rem = code;
    for (int i = 0; i < nc; ++i) {
      const int digit = rem % 3;  // 0 -> -1, 1 -> 0, 2 -> +1
      rem /= 3;
      t[circles[i]] =
          static_cast<double>(digit - 1) * m.factor(circles[i]).circumference();
    }
    out.push_back(std::move(t));
  }
  std::sort(out.begin(), out.end(),
            [](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
              for (int i = 0; i < a.size(); ++i) {
                if (a[i] != b[i]) return a[i] < b[i];
              }
              return false;
            });
  return out;
}

// Does the translated hull intersect the polytope?  LP over hull weights.
bool hull_intersects_polytope(const ConvexObstacle& obs,
                              const Eigen::VectorXd& t, const Polytope& box) {
  const int mv = obs.count();
  const Eigen::MatrixXd AV = box.A * obs.vertices;
  Eigen::MatrixXd A(box.rows() + mv + 2, mv);
  Eigen::VectorXd b(box.rows() + mv + 2);
  A.topRows(box.rows()) = AV;
  b.head(box.rows()) = box.b - box.A * t;
  A.block(box.rows(), 0, mv, mv) = -Eigen::MatrixXd::Identity(mv, mv);
  b.segment(box.rows(), mv).setZero();
  A.row(box.rows() + mv).setOnes();
  b[box.rows() + mv] = 1.0;
  A.row(box.rows() + mv + 1).setConstant(-1.0);
  b[box.rows() + mv + 1] = -1.0;
  const auto res = solvers::solve_lp(Eigen::VectorXd::Zero(mv), A, b);
  return res.status == solvers::LpStatus::Optimal;
}

}  // namespace

double GrowParams::resolved_epsilon(const FlatManifold& m) const {
  if (epsilon > 0.0) return epsilon;
  double min_c = std::numeric_limits<double>::infinity();
  for (const Factor& f : m.factors()) {
    if (f.is_circle()) min_c = std::min(min_c, f.circumference());
  }
  if (!std::isfinite(min_c)) min_c = 1.0;  // no circles: value is unused
  return 1e-3 * min_c;
}

void convexity_box_bounds(const MPoint& seed, const FlatManifold& m,
                          double epsilon, Eigen::VectorXd* lo,
                          Eigen::VectorXd* hi) {
  if (seed.coords.size() != m.dim()) {
    fail(ErrorCode::DimensionMismatch, "seed dimension mismatch");
  }
  if (!(epsilon > 0.0)) {
    fail(ErrorCode::EpsilonTooLarge, "epsilon must be positive");
  }
  lo->resize(m.dim());
  hi->resize(m.dim());
  for (int i = 0; i < m.dim(); ++i) {
    const Factor& f = m.factor(i);
    if (f.is_circle()) {
      const double r = f.convexity_radius();
      if (epsilon >= r) {
        std::ostringstream os;
        os << "epsilon " << epsilon << " >= convexity radius " << r
           << " on dimension " << i;
        fail(ErrorCode::EpsilonTooLarge, os.str());
      }
      (*lo)[i] = seed.coords[i] - (r - epsilon);
      (*hi)[i] = seed.coords[i] + (r - epsilon);
    } else {
      if (!f.bounded()) {
        std::ostringstream os;
        os << "line factor " << i << " is unbounded; regions must be bounded";
        fail(ErrorCode::UnboundedFactor, os.str());
      }
      (*lo)[i] = f.lo();
      (*hi)[i] = f.hi();
    }
  }
}

Polytope convexity_box(const MPoint& seed, const FlatManifold& m,
                       double epsilon) {
  Eigen::VectorXd lo, hi;
  convexity_box_bounds(seed, m, epsilon, &lo, &hi);
  return Polytope::axis_box(lo, hi);
}

std::vector<ConvexObstacle> wrap_obstacles(
    const std::vector<ConvexObstacle>& obstacles, const Polytope& box,
    const FlatManifold& m) {
  for (size_t oi = 0; oi < obstacles.size(); ++oi) {
    const ConvexObstacle& obs = obstacles[oi];
    if (obs.dim() != m.dim()) {
      fail(ErrorCode::DimensionMismatch,
           "obstacle " + std::to_string(oi) + " dimension mismatch");
    }
    if (obs.count() == 0) {
      fail(ErrorCode::BadInput,
           "obstacle " + std::to_string(oi) + " has no vertices");
    }
    if (!obs.vertices.allFinite()) {
      fail(ErrorCode::BadInput,
           "obstacle " + std::to_string(oi) + " has non-finite vertices");
    }
    for (int i = 0; i < m.dim(); ++i) {
      if (!m.factor(i).is_circle()) continue;
      const double span =
          obs.vertices.row(i).maxCoeff() - obs.vertices.row(i).minCoeff();
      if (span >= m.factor(i).circumference()) {
        std::ostringstream os;
        os << "obstacle " << oi << " spans " << span << " >= circumference "
           << m.factor(i).circumference() << " on dimension " << i;
        fail(ErrorCode::ObstacleTooLarge, os.str());
      }
    }
  }

  const auto translations = circle_offset_translations(m);
  std::vector<ConvexObstacle> out;
  for (const ConvexObstacle& obs : obstacles) {
    for (const Eigen::VectorXd& t : translations) {
      if (hull_intersects_polytope(obs, t, box)) {
        ConvexObstacle copy;
        copy.vertices = obs.vertices.colwise() + t;
        out.push_back(std::move(copy));
      }
    }
  }
  return out;
}

double obstacle_distance(const ConvexObstacle& obs, const Eigen::VectorXd& x) {
  return solvers::closest_point_in_hull(obs.vertices, x).distance;
}

GrowResult grow_region(const MPoint& seed,
                       const std::vector<ConvexObstacle>& obstacles,
                       const FlatManifold& m, const GrowParams& params,
                       const std::string& id) {
  const double eps = params.resolved_epsilon(m);
  Eigen::VectorXd lo, hi;
  convexity_box_bounds(seed, m, eps, &lo, &hi);
  const Polytope box = Polytope::axis_box(lo, hi);
  const int d = m.dim();

  GrowResult result;
  result.wrapped_obstacles = wrap_obstacles(obstacles, box, m);
  const auto& wrapped = result.wrapped_obstacles;

  for (size_t oi = 0; oi < wrapped.size(); ++oi) {
    const double dist = obstacle_distance(wrapped[oi], seed.coords);
    if (dist <= params.configuration_margin + 1e-12) {
      std::ostringstream os;
      os << "seed is within " << dist << " of wrapped obstacle " << oi
         << " (required clearance " << params.configuration_margin << ")";
      fail(ErrorCode::SeedInCollision, os.str());
    }
  }

  // Alternation state: current polytope and ellipsoid.
  Polytope current = box;
  std::vector<SeparationCertificate> current_certs;
  Eigen::MatrixXd B =
      1e-6 * (hi - lo).minCoeff() * Eigen::MatrixXd::Identity(d, d);
  Eigen::VectorXd center = seed.coords;
  double volume = std::pow((hi - lo).minCoeff() * 1e-6, d);

  for (int iter = 1; iter <= params.max_iterations; ++iter) {
    // Closest points in the ellipsoid metric, nearest obstacles first.
    const Eigen::MatrixXd Binv =
        B.llt().solve(Eigen::MatrixXd::Identity(d, d));
    struct Closest {
      int obstacle;
      double metric_dist;
      Eigen::VectorXd point;  // chart coordinates
    };
    std::vector<Closest> order;
    for (size_t oi = 0; oi < wrapped.size(); ++oi) {
      const Eigen::MatrixXd local =
          Binv * (wrapped[oi].vertices.colwise() - center);
      const auto mn = solvers::min_norm_point(local);
      if (mn.distance < 1e-12) {
        fail(ErrorCode::Degenerate,
             "ellipsoid center fell inside obstacle " + std::to_string(oi));
      }
      order.push_back(
          {static_cast<int>(oi), mn.distance, center + B * mn.point});
    }
    std::stable_sort(order.begin(), order.end(),
                     [](const Closest& a, const Closest& b) {
                       return a.metric_dist < b.metric_dist;
                     });

    std::vector<Eigen::VectorXd> plane_a;
    std::vector<double> plane_b;
    std::vector<SeparationCertificate> certs;
    for (const Closest& cl : order) {
      // Skip obstacles already excluded by a plane from this round.
      bool excluded = false;
      for (size_t pi = 0; pi < plane_a.size() && !excluded; ++pi) {
        const Eigen::VectorXd vals =
            wrapped[cl.obstacle].vertices.transpose() * plane_a[pi];
        if (vals.minCoeff() >= plane_b[pi] - 1e-12) {
          excluded = true;
          certs.push_back({cl.obstacle, static_cast<int>(pi), cl.point});
        }
      }
      if (excluded) continue;
      // Tangent plane at the closest point: gradient of the ellipsoid
      // metric, which bounds the whole obstacle by KKT of the closest-point
      // program.
      Eigen::VectorXd a = Binv.transpose() * (Binv * (cl.point - center));
      const double norm = a.norm();
      if (norm < 1e-300) {
        fail(ErrorCode::Degenerate, "separating hyperplane degenerated");
      }
      a /= norm;
      const double beta = a.dot(cl.point) - params.configuration_margin;
      certs.push_back(
          {cl.obstacle, static_cast<int>(plane_a.size()), cl.point});
      plane_a.push_back(std::move(a));
      plane_b.push_back(beta);
    }

    Polytope candidate = box;
    if (!plane_a.empty()) {
      Polytope planes;
      planes.A.resize(static_cast<int>(plane_a.size()), d);
      planes.b.resize(static_cast<int>(plane_a.size()));
      for (size_t pi = 0; pi < plane_a.size(); ++pi) {
        planes.A.row(static_cast<int>(pi)) = plane_a[pi].transpose();
        planes.b[static_cast<int>(pi)] = plane_b[pi];
      }
      candidate = Polytope::intersection(box, planes);
    }
    if (!candidate.contains(seed.coords, kMembershipTol)) {
      // A later-round plane would cut off the seed; keep the previous round.
      break;
    }
    // Certificate rows are offset by the box rows in the final polytope.
    for (auto& c : certs) c.row += box.rows();

    double new_volume = 0.0;
    if (params.chebyshev_ball) {
      const ChebyshevBall ball = chebyshev_center(candidate);
      if (!ball.feasible() || ball.radius <= 0.0) {
        fail(ErrorCode::Degenerate, "inscribed ball collapsed");
      }
      B = ball.radius * Eigen::MatrixXd::Identity(d, d);
      center = ball.center;
      new_volume = std::pow(M_PI, d / 2.0) / std::tgamma(d / 2.0 + 1.0) *
                   std::pow(ball.radius, d);
    } else {
      const auto ell =
          solvers::max_volume_inscribed_ellipsoid(candidate.A, candidate.b);
      if (!std::isfinite(ell.log_det_B)) {
        fail(ErrorCode::Degenerate, "inscribed ellipsoid collapsed");
      }
      B = ell.B;
      center = ell.d;
      new_volume = ell.volume();
    }
    if (new_volume < 1e-12) {
      fail(ErrorCode::Degenerate, "inscribed ellipsoid volume below 1e-12");
    }

    current = candidate;
    current_certs = certs;
    result.iterations = iter;
    const double growth = (new_volume - volume) / volume;
    volume = new_volume;
    if (iter > 1 && growth < params.termination_growth) break;
  }

  result.region.polytope = current;
  result.region.seed = seed;
  result.region.box_lo = lo;
  result.region.box_hi = hi;
  result.region.id = id;
  result.certificates = current_certs;
  result.volume = volume;
  return result;
}

GconvexReport check_gconvex(const Region& region, const FlatManifold& m,
                            int n_samples, unsigned rng_seed) {
  GconvexReport report;
  report.pairs = n_samples;
  std::mt19937_64 rng(rng_seed);
  PolytopeSampler sampler(region.polytope, region.box_lo, region.box_hi);

  constexpr int kGeodesicSamples = 32;
  for (int pair = 0; pair < n_samples; ++pair) {
    const Eigen::VectorXd xa = sampler.sample(rng);
    const Eigen::VectorXd xb = sampler.sample(rng);
    const MPoint pa = m.canonicalize(xa);
    const MPoint pb = m.canonicalize(xb);
    Eigen::VectorXd delta;
    try {
      delta = m.minimizing_delta(pa, pb, /*strict=*/true);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::AntipodalAmbiguity) {
        ++report.violations;  // non-unique geodesic: not g-convex
        continue;
      }
      throw;
    }
    bool violated = false;
    for (int j = 0; j < kGeodesicSamples; ++j) {
      const double t =
          static_cast<double>(j) / static_cast<double>(kGeodesicSamples - 1);
      const MPoint y = m.canonicalize(pa.coords + t * delta);
      // Pull back through the region's chart: the lift inside the box.
      Eigen::VectorXd chart = y.coords;
      double box_excess = 0.0;
      for (int i = 0; i < m.dim(); ++i) {
        if (!m.factor(i).is_circle()) continue;
        const double c = m.factor(i).circumference();
        // Integer shift bringing the coordinate nearest the box interval.
        const double mid = 0.5 * (region.box_lo[i] + region.box_hi[i]);
        const double k = std::round((mid - y.coords[i]) / c);
        chart[i] = y.coords[i] + k * c;
        const double excess = std::max(region.box_lo[i] - chart[i],
                                       chart[i] - region.box_hi[i]);
        box_excess = std::max(box_excess, excess);
      }
      const double excess =
          std::max(box_excess, region.polytope.max_violation(chart));
      if (excess > kMembershipTol) {
        violated = true;
        report.worst_excess = std::max(report.worst_excess, excess);
      }
    }
    if (violated) ++report.violations;
  }
  return report;
}

std::optional<Eigen::VectorXd> region_overlap(const Region& u,
                                              const Region& v,
                                              const Offset& k,
                                              const FlatManifold& m) {
  Eigen::VectorXd t = Eigen::VectorXd::Zero(m.dim());
  for (int i = 0; i < m.dim(); ++i) {
    if (m.factor(i).is_circle()) {
      t[i] = static_cast<double>(k.k[i]) * m.factor(i).circumference();
    }
  }
  const Polytope joint =
      Polytope::intersection(u.polytope, v.polytope.shifted(t));
  const ChebyshevBall ball = chebyshev_center(joint);
  if (!ball.feasible()) return std::nullopt;
  return ball.center;
}

}  // namespace geoplan
