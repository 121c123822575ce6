#include "doctest.h"

#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <vector>

#include "geoplan/polytope.hpp"
#include "geoplan/solvers/cone_program.hpp"
#include "geoplan/solvers/inscribed_ellipsoid.hpp"
#include "geoplan/solvers/linprog.hpp"
#include "geoplan/solvers/min_norm_point.hpp"

using namespace geoplan;
using namespace geoplan::solvers;
using Eigen::MatrixXd;
using Eigen::Vector2d;
using Eigen::VectorXd;

namespace {

// Brute-force LP oracle for 2-D problems: enumerate all constraint pairs as
// vertex candidates and take the best feasible one.
struct Lp2Oracle {
  double objective = -std::numeric_limits<double>::infinity();
  bool feasible = false;
};

Lp2Oracle lp2_brute_force(const VectorXd& c, const MatrixXd& A,
                          const VectorXd& b) {
  Lp2Oracle out;
  const int m = static_cast<int>(A.rows());
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      Eigen::Matrix2d M;
      M.row(0) = A.row(i);
      M.row(1) = A.row(j);
      if (std::abs(M.determinant()) < 1e-12) continue;
      const Vector2d x = M.inverse() * Vector2d(b[i], b[j]);
      if (((A * x - b).array() <= 1e-9).all()) {
        out.feasible = true;
        out.objective = std::max(out.objective, c.dot(x));
      }
    }
  }
  return out;
}

// Exhaustive min-norm oracle: the optimum is the affine minimizer of its
// support set, so enumerating all subsets with nonnegative weights finds it.
double min_norm_brute_force(const MatrixXd& V) {
  const int m = static_cast<int>(V.cols());
  double best = std::numeric_limits<double>::infinity();
  for (int mask = 1; mask < (1 << m); ++mask) {
    std::vector<int> idx;
    for (int j = 0; j < m; ++j) {
      if (mask & (1 << j)) idx.push_back(j);
    }
    const int k = static_cast<int>(idx.size());
    MatrixXd P(V.rows(), k);
    for (int j = 0; j < k; ++j) P.col(j) = V.col(idx[j]);
    MatrixXd kkt(k + 1, k + 1);
    kkt.topLeftCorner(k, k) = P.transpose() * P;
    kkt.topRightCorner(k, 1).setOnes();
    kkt.bottomLeftCorner(1, k).setOnes();
    kkt(k, k) = 0.0;
    VectorXd rhs = VectorXd::Zero(k + 1);
    rhs[k] = 1.0;
    const VectorXd sol = kkt.completeOrthogonalDecomposition().solve(rhs);
    const VectorXd w = sol.head(k);
    if (w.minCoeff() < -1e-10) continue;
    if (std::abs(w.sum() - 1.0) > 1e-8) continue;
    best = std::min(best, (P * w).norm());
  }
  return best;
}

}  // namespace

TEST_CASE("linprog solves simple box problems") {
  MatrixXd A(4, 2);
  A << 1, 0, -1, 0, 0, 1, 0, -1;
  VectorXd b(4);
  b << 1, 0, 2, 0;
  VectorXd c(2);
  c << 1, 3;
  const auto res = solve_lp(c, A, b);
  REQUIRE(res.status == LpStatus::Optimal);
  CHECK(res.objective == doctest::Approx(7.0).epsilon(1e-10));
  CHECK(res.x[0] == doctest::Approx(1.0));
  CHECK(res.x[1] == doctest::Approx(2.0));
}

TEST_CASE("linprog reports infeasible and unbounded problems") {
  MatrixXd A(2, 1);
  A << 1, -1;
  VectorXd b(2);
  b << -1, -1;  // x <= -1 and x >= 1
  VectorXd c = VectorXd::Ones(1);
  CHECK(solve_lp(c, A, b).status == LpStatus::Infeasible);

  MatrixXd A2(1, 1);
  A2 << -1;  // x >= -5, maximize x
  VectorXd b2(1);
  b2 << 5;
  CHECK(solve_lp(c, A2, b2).status == LpStatus::Unbounded);
}

TEST_CASE("linprog matches a vertex-enumeration oracle on random LPs") {
  std::mt19937_64 rng(31u);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int extra = 2 + static_cast<int>(rng() % 6);
    MatrixXd A(4 + extra, 2);
    VectorXd b(4 + extra);
    A.topRows(4) << 1, 0, -1, 0, 0, 1, 0, -1;
    b.head(4) << 2, 2, 2, 2;  // bounding box keeps the LP bounded
    for (int i = 0; i < extra; ++i) {
      A.row(4 + i) << unif(rng), unif(rng);
      if (A.row(4 + i).norm() < 0.1) A(4 + i, 0) += 0.5;
      b[4 + i] = unif(rng);
    }
    VectorXd c(2);
    c << unif(rng), unif(rng);
    const auto res = solve_lp(c, A, b);
    const auto oracle = lp2_brute_force(c, A, b);
    if (!oracle.feasible) {
      CHECK(res.status == LpStatus::Infeasible);
    } else {
      REQUIRE(res.status == LpStatus::Optimal);
      CHECK(res.objective == doctest::Approx(oracle.objective).epsilon(1e-7));
      CHECK(((A * res.x - b).array() <= 1e-8).all());
    }
  }
}

TEST_CASE("chebyshev center of a box") {
  const Polytope box = Polytope::axis_box(Vector2d(0, 0), Vector2d(2, 1));
  const auto ball = chebyshev_center(box);
  REQUIRE(ball.feasible());
  CHECK(ball.radius == doctest::Approx(0.5));
  CHECK(ball.center[1] == doctest::Approx(0.5));
}

TEST_CASE("min_norm_point matches subset enumeration on random hulls") {
  std::mt19937_64 rng(7u);
  std::uniform_real_distribution<double> unif(-2.0, 2.0);
  for (int trial = 0; trial < 150; ++trial) {
    const int d = 2 + static_cast<int>(rng() % 2);
    const int m = 1 + static_cast<int>(rng() % 6);
    MatrixXd V(d, m);
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < m; ++j) V(i, j) = unif(rng);
    }
    const auto res = min_norm_point(V);
    const double brute = min_norm_brute_force(V);
    CHECK(res.distance == doctest::Approx(brute).epsilon(1e-6));
    // Returned weights reproduce the returned point.
    CHECK((V * res.weights - res.point).norm() < 1e-9);
    CHECK(res.weights.minCoeff() >= -1e-12);
    CHECK(res.weights.sum() == doctest::Approx(1.0));
  }
}

TEST_CASE("closest_point_in_hull on a segment") {
  MatrixXd V(2, 2);
  V.col(0) = Vector2d(1, -1);
  V.col(1) = Vector2d(1, 1);
  const auto res = closest_point_in_hull(V, Vector2d(0, 0));
  CHECK(res.point.x() == doctest::Approx(1.0));
  CHECK(res.point.y() == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(res.distance == doctest::Approx(1.0));
}

TEST_CASE("inscribed ellipsoid of a box is the box's inner ellipse") {
  const Polytope box =
      Polytope::axis_box(Vector2d(-1, -0.5), Vector2d(1, 0.5));
  const auto e = max_volume_inscribed_ellipsoid(box.A, box.b);
  REQUIRE(std::isfinite(e.log_det_B));
  CHECK(e.d.norm() < 1e-6);
  CHECK(e.B(0, 0) == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(e.B(1, 1) == doctest::Approx(0.5).epsilon(1e-4));
  CHECK(std::abs(e.B(0, 1)) < 1e-6);
}

TEST_CASE("inscribed ellipsoid of a triangle touches the known optimum") {
  // Right triangle x >= 0, y >= 0, x + y <= 1.  The maximum-area inscribed
  // ellipse is centered at the centroid with area pi/(3 sqrt 3) * area(T).
  MatrixXd A(3, 2);
  A << -1, 0, 0, -1, 1, 1;
  VectorXd b(3);
  b << 0, 0, 1;
  const auto e = max_volume_inscribed_ellipsoid(A, b);
  REQUIRE(std::isfinite(e.log_det_B));
  CHECK(e.d[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-4));
  CHECK(e.d[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-4));
  const double det = std::exp(e.log_det_B);
  CHECK(det == doctest::Approx(0.5 / (3.0 * std::sqrt(3.0))).epsilon(1e-4));
}

TEST_CASE("inscribed ellipsoid is affine-equivariant") {
  std::mt19937_64 rng(11u);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  const Polytope box = Polytope::axis_box(Vector2d(-1, -1), Vector2d(1, 1));
  for (int trial = 0; trial < 10; ++trial) {
    Eigen::Matrix2d T;
    T << unif(rng), unif(rng), unif(rng), unif(rng);
    if (std::abs(T.determinant()) < 0.2) continue;
    const Vector2d t(unif(rng), unif(rng));
    // Image polytope {x : A T^{-1} (x - t) <= b}.
    MatrixXd A2 = box.A * T.inverse();
    VectorXd b2 = box.b + A2 * t;
    const auto e = max_volume_inscribed_ellipsoid(A2, b2);
    REQUIRE(std::isfinite(e.log_det_B));
    CHECK(std::exp(e.log_det_B) ==
          doctest::Approx(std::abs(T.determinant())).epsilon(1e-3));
    CHECK((e.d - t).norm() < 1e-4);
  }
}

namespace {

// min sum_k |w_k - w_{k-1}| through junction polytopes with fixed endpoints,
// assembled directly in conic form.  Junction j lives in sets[j].
ConeResult solve_chain_direct(const std::vector<Polytope>& sets,
                              const VectorXd& start, const VectorXd& goal,
                              VectorXd* junctions = nullptr) {
  const int J = static_cast<int>(sets.size());
  const int d = static_cast<int>(start.size());
  const int n = J * d + (J + 1);
  Eigen::Index lp_rows = 0;
  for (const auto& p : sets) lp_rows += p.rows();
  const Eigen::Index m = lp_rows + (J + 1) * (d + 1);

  VectorXd c = VectorXd::Zero(n);
  c.tail(J + 1).setOnes();
  MatrixXd G = MatrixXd::Zero(m, n);
  VectorXd h = VectorXd::Zero(m);
  ConeDims dims;
  dims.nonneg = lp_rows;

  Eigen::Index row = 0;
  for (int j = 0; j < J; ++j) {
    G.block(row, j * d, sets[j].rows(), d) = sets[j].A;
    h.segment(row, sets[j].rows()) = sets[j].b;
    row += sets[j].rows();
  }
  for (int k = 0; k <= J; ++k) {
    dims.soc.push_back(d + 1);
    G(row, J * d + k) = -1.0;  // s0 = r_k
    // s1 = w_k - w_{k-1} with constants in h.
    if (k > 0) G.block(row + 1, (k - 1) * d, d, d) = MatrixXd::Identity(d, d);
    if (k < J) G.block(row + 1, k * d, d, d) = -MatrixXd::Identity(d, d);
    if (k == 0) h.segment(row + 1, d) = -start;
    if (k == J) h.segment(row + 1, d) = goal;
    row += d + 1;
  }
  const auto res = solve_cone(c, G, h, dims);
  if (junctions) *junctions = res.x.head(J * d);
  return res;
}

}  // namespace

TEST_CASE("cone program: straight line through an overlap") {
  std::vector<Polytope> sets = {
      Polytope::axis_box(Vector2d(0.49, 0.0), Vector2d(0.51, 1.0))};
  const auto res = solve_chain_direct(sets, Vector2d(0.1, 0.1),
                                      Vector2d(0.9, 0.9));
  REQUIRE(res.status == ConeStatus::Optimal);
  CHECK(res.primal_obj ==
        doctest::Approx(std::hypot(0.8, 0.8)).epsilon(1e-9));
  CHECK(res.certificate() < 1e-8);
}

TEST_CASE("cone program: taut path around a corner") {
  // Junction constrained to [0.7,1]x[0,0.3]; optimum pins it at the corner.
  std::vector<Polytope> sets = {
      Polytope::axis_box(Vector2d(0.7, 0.0), Vector2d(1.0, 0.3))};
  VectorXd w;
  const auto res =
      solve_chain_direct(sets, Vector2d(0.1, 0.15), Vector2d(0.85, 0.9), &w);
  REQUIRE(res.status == ConeStatus::Optimal);
  const double expect = std::hypot(0.6, 0.15) + std::hypot(0.15, 0.6);
  CHECK(res.primal_obj == doctest::Approx(expect).epsilon(1e-8));
  CHECK((w - Vector2d(0.7, 0.3)).norm() < 1e-6);
}

TEST_CASE("cone program: zero-length middle segment is handled") {
  // Three sets meeting at (0.5, 0.5); the middle one is crossed at a point.
  std::vector<Polytope> sets = {
      Polytope::axis_box(Vector2d(0.45, 0.45), Vector2d(0.5, 0.5)),
      Polytope::axis_box(Vector2d(0.5, 0.5), Vector2d(0.55, 0.55))};
  const auto res =
      solve_chain_direct(sets, Vector2d(0.1, 0.1), Vector2d(0.9, 0.9));
  REQUIRE(res.status == ConeStatus::Optimal);
  CHECK(res.primal_obj ==
        doctest::Approx(std::hypot(0.8, 0.8)).epsilon(1e-8));
  CHECK(res.certificate() < 1e-8);
}

TEST_CASE("cone program beats random feasible candidates") {
  std::mt19937_64 rng(5u);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int trial = 0; trial < 25; ++trial) {
    // Random chain of shifted boxes in 2-D.
    const int J = 1 + static_cast<int>(rng() % 3);
    std::vector<Polytope> sets;
    std::vector<Vector2d> lo(J), hi(J);
    for (int j = 0; j < J; ++j) {
      lo[j] = Vector2d(unif(rng), unif(rng));
      hi[j] = lo[j] + Vector2d(0.3 + unif(rng), 0.3 + unif(rng));
      sets.push_back(Polytope::axis_box(lo[j], hi[j]));
    }
    const Vector2d start(unif(rng) * 2.0 - 0.5, unif(rng) * 2.0 - 0.5);
    const Vector2d goal(unif(rng) * 2.0 - 0.5, unif(rng) * 2.0 - 0.5);
    const auto res = solve_chain_direct(sets, start, goal);
    REQUIRE(res.status == ConeStatus::Optimal);
    CHECK(res.certificate() < 1e-8);
    // No random feasible junction assignment may beat the optimum.
    for (int cand = 0; cand < 50; ++cand) {
      double obj = 0.0;
      Vector2d prev = start;
      for (int j = 0; j < J; ++j) {
        Vector2d w;
        for (int i = 0; i < 2; ++i) {
          w[i] = lo[j][i] + (hi[j][i] - lo[j][i]) * unif(rng);
        }
        obj += (w - prev).norm();
        prev = w;
      }
      obj += (goal - prev).norm();
      CHECK(obj >= res.primal_obj - 1e-7);
    }
  }
}
