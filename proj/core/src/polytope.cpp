#include "geoplan/polytope.hpp"

#include <algorithm>
#include <cmath>

#include "geoplan/errors.hpp"
#include "geoplan/solvers/linprog.hpp"

namespace geoplan {

using solvers::LpStatus;

Polytope Polytope::axis_box(const Eigen::VectorXd& lo,
                            const Eigen::VectorXd& hi) {
  const int d = static_cast<int>(lo.size());
  Polytope p;
  p.A = Eigen::MatrixXd::Zero(2 * d, d);
  p.b = Eigen::VectorXd::Zero(2 * d);
  for (int i = 0; i < d; ++i) {
    p.A(2 * i, i) = 1.0;
    p.b[2 * i] = hi[i];
    p.A(2 * i + 1, i) = -1.0;
    p.b[2 * i + 1] = -lo[i];
  }
  return p;
}

Polytope Polytope::intersection(const Polytope& p, const Polytope& q) {
  Polytope out;
  out.A.resize(p.rows() + q.rows(), p.dim());
  out.A << p.A, q.A;
  out.b.resize(p.rows() + q.rows());
  out.b << p.b, q.b;
  return out;
}

Polytope Polytope::shifted(const Eigen::VectorXd& t) const {
  Polytope out{A, b + A * t};
  return out;
}

bool Polytope::contains(const Eigen::VectorXd& x, double tol) const {
  return max_violation(x) <= tol;
}

double Polytope::max_violation(const Eigen::VectorXd& x) const {
  if (rows() == 0) return -std::numeric_limits<double>::infinity();
  return (A * x - b).maxCoeff();
}

void Polytope::validate() const {
  if (!A.allFinite() || !b.allFinite()) {
    fail(ErrorCode::BadInput, "polytope has NaN or infinite entries");
  }
  for (int i = 0; i < rows(); ++i) {
    if (A.row(i).norm() < 1e-12) {
      fail(ErrorCode::BadInput, "polytope row " + std::to_string(i) +
                                    " has near-zero norm");
    }
  }
}

ChebyshevBall chebyshev_center(const Polytope& p) {
  // max r  s.t.  a_i'x + ||a_i|| r <= b_i,  r >= 0
  const int d = p.dim();
  const int m = p.rows();
  Eigen::MatrixXd A(m + 1, d + 1);
  Eigen::VectorXd b(m + 1);
  for (int i = 0; i < m; ++i) {
    A.row(i).head(d) = p.A.row(i);
    A(i, d) = p.A.row(i).norm();
    b[i] = p.b[i];
  }
  A.row(m).setZero();
  A(m, d) = -1.0;
  b[m] = 0.0;
  Eigen::VectorXd c = Eigen::VectorXd::Zero(d + 1);
  c[d] = 1.0;
  const auto res = solvers::solve_lp(c, A, b);
  ChebyshevBall ball;
  if (res.status == LpStatus::Optimal) {
    ball.center = res.x.head(d);
    ball.radius = res.x[d];
  } else if (res.status == LpStatus::Unbounded) {
    fail(ErrorCode::BadInput, "chebyshev center of an unbounded polytope");
  }
  return ball;
}

double support_value(const Polytope& p, const Eigen::VectorXd& d) {
  const auto res = solvers::solve_lp(d, p.A, p.b);
  switch (res.status) {
    case LpStatus::Optimal:
      return res.objective;
    case LpStatus::Unbounded:
      return std::numeric_limits<double>::infinity();
    case LpStatus::Infeasible:
    default:
      return std::numeric_limits<double>::quiet_NaN();
  }
}

std::optional<Eigen::VectorXd> feasible_point(const Polytope& p) {
  const ChebyshevBall ball = chebyshev_center(p);
  if (!ball.feasible()) return std::nullopt;
  return ball.center;
}

PolytopeSampler::PolytopeSampler(const Polytope& p,
                                 const Eigen::VectorXd& box_lo,
                                 const Eigen::VectorXd& box_hi)
    : poly_(p), lo_(box_lo), hi_(box_hi) {
  const ChebyshevBall ball = chebyshev_center(p);
  if (!ball.feasible()) {
    fail(ErrorCode::BadInput, "sampling from an empty polytope");
  }
  state_ = ball.center;
  radius_ = ball.radius;
  degenerate_ = radius_ < 1e-12;
  // Thin sets make rejection hopeless; start with hit-and-run directly.
  const double box_scale = (hi_ - lo_).maxCoeff();
  use_rejection_ = radius_ > 1e-3 * std::max(box_scale, 1e-30);
}

Eigen::VectorXd PolytopeSampler::sample(std::mt19937_64& rng) {
  if (degenerate_) return state_;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  if (use_rejection_) {
    for (int attempt = 0; attempt < 256; ++attempt) {
      Eigen::VectorXd x(lo_.size());
      for (int i = 0; i < x.size(); ++i) {
        x[i] = lo_[i] + (hi_[i] - lo_[i]) * unif(rng);
      }
      if (poly_.contains(x, 0.0)) return x;
    }
    use_rejection_ = false;  // acceptance too low for this shape
  }
  return hit_and_run(rng);
}

Eigen::VectorXd PolytopeSampler::hit_and_run(std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const int d = static_cast<int>(state_.size());
  const int steps = 8 * d + 8;
  for (int s = 0; s < steps; ++s) {
    Eigen::VectorXd dir(d);
    for (int i = 0; i < d; ++i) dir[i] = gauss(rng);
    const double nrm = dir.norm();
    if (nrm < 1e-300) continue;
    dir /= nrm;
    // Feasible chord through state_ along dir.
    double t_lo = -std::numeric_limits<double>::infinity();
    double t_hi = std::numeric_limits<double>::infinity();
    const Eigen::VectorXd ad = poly_.A * dir;
    const Eigen::VectorXd slack = poly_.b - poly_.A * state_;
    for (int i = 0; i < poly_.rows(); ++i) {
      if (ad[i] > 1e-14) {
        t_hi = std::min(t_hi, slack[i] / ad[i]);
      } else if (ad[i] < -1e-14) {
        t_lo = std::max(t_lo, slack[i] / ad[i]);
      }
    }
    if (!(t_hi > t_lo)) continue;
    state_ += (t_lo + (t_hi - t_lo) * unif(rng)) * dir;
  }
  return state_;
}

std::vector<Eigen::Vector2d> polygon_vertices_2d(const Polytope& p) {
  if (p.dim() != 2) {
    fail(ErrorCode::DimensionMismatch, "polygon_vertices_2d needs dim 2");
  }
  // Clip a generous bounding square by every halfplane.
  const ChebyshevBall ball = chebyshev_center(p);
  if (!ball.feasible() || ball.radius < 1e-12) return {};
  double reach = 0.0;
  for (int i = 0; i < 2; ++i) {
    for (double sgn : {1.0, -1.0}) {
      Eigen::VectorXd dir = Eigen::VectorXd::Zero(2);
      dir[i] = sgn;
      const double s = support_value(p, dir);
      if (!std::isfinite(s)) return {};  // unbounded
      reach = std::max(reach, std::abs(s));
    }
  }
  const double r = 2.0 * reach + 1.0;
  std::vector<Eigen::Vector2d> poly = {{-r, -r}, {r, -r}, {r, r}, {-r, r}};
  for (int i = 0; i < p.rows() && !poly.empty(); ++i) {
    const Eigen::Vector2d a = p.A.row(i).transpose();
    const double b = p.b[i];
    std::vector<Eigen::Vector2d> next;
    const int n = static_cast<int>(poly.size());
    for (int j = 0; j < n; ++j) {
      const Eigen::Vector2d& cur = poly[j];
      const Eigen::Vector2d& nxt = poly[(j + 1) % n];
      const double dc = a.dot(cur) - b;
      const double dn = a.dot(nxt) - b;
      if (dc <= 1e-12) next.push_back(cur);
      if ((dc < -1e-12 && dn > 1e-12) || (dc > 1e-12 && dn < -1e-12)) {
        const double t = dc / (dc - dn);
        next.push_back(cur + t * (nxt - cur));
      }
    }
    poly = std::move(next);
  }
  return poly;
}

}  // namespace geoplan
