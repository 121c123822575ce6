#pragma once

#include <Eigen/Core>
#include <vector>

namespace geoplan::solvers {

/// Cone layout for the slack vector: first `nonneg` entries in the
/// nonnegative orthant, then one second-order cone block per entry of `soc`
/// (block size = entry, first coordinate is the cone "height").
struct ConeDims {
  Eigen::Index nonneg = 0;
  std::vector<Eigen::Index> soc;

  Eigen::Index total() const {
    Eigen::Index t = nonneg;
    for (auto q : soc) t += q;
    return t;
  }
  Eigen::Index degree() const {
    return nonneg + static_cast<Eigen::Index>(soc.size());
  }
};

enum class ConeStatus { Optimal, MaxIterations, NumericalFailure };

struct ConeResult {
  ConeStatus status = ConeStatus::NumericalFailure;
  Eigen::VectorXd x, s, z;
  double primal_obj = 0.0;
  double dual_obj = 0.0;
  double gap = 0.0;      // complementarity s'z
  double rel_gap = 0.0;
  double pres = 0.0;     // ||Gx + s - h|| / max(1, ||h||)
  double dres = 0.0;     // ||G'z + c|| / max(1, ||c||)
  int iterations = 0;

  double certificate() const { return std::max({gap, pres, dres}); }
};

struct ConeOptions {
  double feas_tol = 1e-9;
  double gap_tol = 1e-9;
  double rel_gap_tol = 1e-10;
  int max_iterations = 100;
};

/// Solves  min c'x  s.t.  G x + s = h,  s in K  with its dual, by a standard
/// primal-dual path-following method with Nesterov-Todd scaling and a
/// Mehrotra corrector.  Dense linear algebra; intended for the small
/// sum-of-norms programs this library generates (up to a few hundred rows).
/// Problems are assumed feasible with bounded optimum; the caller checks the
/// returned residuals.
ConeResult solve_cone(const Eigen::VectorXd& c, const Eigen::MatrixXd& G,
                      const Eigen::VectorXd& h, const ConeDims& dims,
                      const ConeOptions& opts = {});

}  // namespace geoplan::solvers
