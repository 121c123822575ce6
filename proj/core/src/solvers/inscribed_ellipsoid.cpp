#include "geoplan/solvers/inscribed_ellipsoid.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <vector>

#include "geoplan/polytope.hpp"

namespace geoplan::solvers {

namespace {

// Shared index layout: theta = [vech(B) over pairs p<=q, center d].
struct SymBasis {
  int dim;
  std::vector<std::pair<int, int>> pairs;

  explicit SymBasis(int d) : dim(d) {
    for (int p = 0; p < d; ++p) {
      for (int q = p; q < d; ++q) pairs.emplace_back(p, q);
    }
  }
  int size() const { return static_cast<int>(pairs.size()); }

  Eigen::MatrixXd to_matrix(const Eigen::VectorXd& theta) const {
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(dim, dim);
    for (int k = 0; k < size(); ++k) {
      const auto [p, q] = pairs[k];
      B(p, q) = theta[k];
      B(q, p) = theta[k];
    }
    return B;
  }

  // E_k a for every basis matrix (E_pp = e_p e_p',
  // E_pq = e_p e_q' + e_q e_p' for p<q).
  Eigen::MatrixXd basis_times(const Eigen::VectorXd& a) const {
    Eigen::MatrixXd Y = Eigen::MatrixXd::Zero(dim, size());
    for (int k = 0; k < size(); ++k) {
      const auto [p, q] = pairs[k];
      if (p == q) {
        Y(p, k) = a[p];
      } else {
        Y(p, k) = a[q];
        Y(q, k) = a[p];
      }
    }
    return Y;
  }
};

struct Objective {
  double value = std::numeric_limits<double>::infinity();
  bool feasible = false;
};

Objective evaluate(double t, const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                   const Eigen::MatrixXd& B, const Eigen::VectorXd& d) {
  Objective out;
  Eigen::LLT<Eigen::MatrixXd> llt(B);
  if (llt.info() != Eigen::Success) return out;
  double log_det = 0.0;
  for (int i = 0; i < B.rows(); ++i) log_det += std::log(llt.matrixL()(i, i));
  log_det *= 2.0;
  double barrier = 0.0;
  for (int i = 0; i < A.rows(); ++i) {
    const double s = b[i] - A.row(i).dot(d) - (B * A.row(i).transpose()).norm();
    if (s <= 0.0) return out;
    barrier -= std::log(s);
  }
  out.value = -t * log_det + barrier;
  out.feasible = true;
  return out;
}

}  // namespace

double Ellipsoid::volume() const {
  const int d = static_cast<int>(this->d.size());
  // Unit ball volume pi^(d/2) / Gamma(d/2 + 1).
  const double unit = std::pow(M_PI, d / 2.0) / std::tgamma(d / 2.0 + 1.0);
  return unit * std::exp(log_det_B);
}

Ellipsoid max_volume_inscribed_ellipsoid(const Eigen::MatrixXd& A,
                                         const Eigen::VectorXd& b,
                                         const EllipsoidOptions& opts) {
  Ellipsoid bad;
  bad.log_det_B = -std::numeric_limits<double>::infinity();

  const int d = static_cast<int>(A.cols());
  const int m = static_cast<int>(A.rows());
  const SymBasis basis(d);
  const int nb = basis.size();
  const int nv = nb + d;

  // Strictly feasible start from the Chebyshev ball.
  Polytope poly{A, b};
  const ChebyshevBall ball = chebyshev_center(poly);
  if (!ball.feasible() || ball.radius <= 1e-12) return bad;

  Eigen::MatrixXd B =
      (ball.radius * (1.0 - 1e-3)) * Eigen::MatrixXd::Identity(d, d);
  Eigen::VectorXd center = ball.center;

  // Precompute E_k a_i and row norms.
  std::vector<Eigen::MatrixXd> Ya(m);
  for (int i = 0; i < m; ++i) Ya[i] = basis.basis_times(A.row(i).transpose());

  double t = opts.t_init;
  int newton_steps = 0;
  while (true) {
    for (;;) {
      if (++newton_steps > opts.max_newton) break;
      // Assemble gradient and Hessian at (B, center).
      Eigen::LLT<Eigen::MatrixXd> llt(B);
      if (llt.info() != Eigen::Success) return bad;
      const Eigen::MatrixXd Binv =
          llt.solve(Eigen::MatrixXd::Identity(d, d));

      Eigen::VectorXd grad = Eigen::VectorXd::Zero(nv);
      Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(nv, nv);

      // -t log det B part.
      std::vector<Eigen::MatrixXd> BinvE(nb);
      for (int k = 0; k < nb; ++k) {
        const auto [p, q] = basis.pairs[k];
        Eigen::MatrixXd E = Eigen::MatrixXd::Zero(d, d);
        E(p, q) += 1.0;
        E(q, p) = (p == q) ? E(q, p) : E(q, p) + 1.0;
        BinvE[k] = Binv * E;
        grad[k] -= t * BinvE[k].trace();
      }
      for (int k = 0; k < nb; ++k) {
        for (int l = k; l < nb; ++l) {
          const double v = t * (BinvE[k] * BinvE[l]).trace();
          hess(k, l) += v;
          if (l != k) hess(l, k) += v;
        }
      }

      // Constraint barrier parts.
      for (int i = 0; i < m; ++i) {
        const Eigen::VectorXd a = A.row(i).transpose();
        const Eigen::VectorXd u = B * a;
        const double n = u.norm();
        if (n < 1e-300) return bad;
        const double s = b[i] - a.dot(center) - n;
        if (s <= 0.0) return bad;
        // gradient of (a'd + |Ba|) over theta
        Eigen::VectorXd gi(nv);
        const Eigen::VectorXd cvec = Ya[i].transpose() * u;  // u' E_k a
        gi.head(nb) = cvec / n;
        gi.tail(d) = a;
        grad += gi / s;
        hess += (gi * gi.transpose()) / (s * s);
        // second derivative of the norm term (B block only)
        Eigen::MatrixXd hn = (Ya[i].transpose() * Ya[i]) / n -
                             (cvec * cvec.transpose()) / (n * n * n);
        hess.topLeftCorner(nb, nb) += hn / s;
      }

      hess.diagonal().array() += 1e-12 * (1.0 + hess.trace() / nv);
      Eigen::LDLT<Eigen::MatrixXd> hldlt(hess);
      const Eigen::VectorXd step = hldlt.solve(-grad);
      const double decrement = -grad.dot(step);
      if (!(decrement > 2e-10)) break;

      const Objective f0 = evaluate(t, A, b, B, center);
      double alpha = 1.0;
      bool moved = false;
      for (int ls = 0; ls < 60; ++ls) {
        const Eigen::MatrixXd Bn =
            B + basis.to_matrix(alpha * step.head(nb));
        const Eigen::VectorXd dn = center + alpha * step.tail(d);
        const Objective f1 = evaluate(t, A, b, Bn, dn);
        if (f1.feasible &&
            f1.value <= f0.value - 1e-4 * alpha * decrement) {
          B = Bn;
          center = dn;
          moved = true;
          break;
        }
        alpha *= 0.5;
      }
      if (!moved) break;
    }
    if (static_cast<double>(m) / t <= opts.gap_tol ||
        newton_steps > opts.max_newton) {
      break;
    }
    t *= opts.t_scale;
  }

  Ellipsoid out;
  out.B = B;
  out.d = center;
  Eigen::LLT<Eigen::MatrixXd> llt(B);
  if (llt.info() != Eigen::Success) return bad;
  double log_det = 0.0;
  for (int i = 0; i < d; ++i) log_det += std::log(llt.matrixL()(i, i));
  out.log_det_B = 2.0 * log_det;
  return out;
}

}  // namespace geoplan::solvers
