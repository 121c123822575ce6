#include "geoplan/solvers/cone_program.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>

namespace geoplan::solvers {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Nesterov-Todd scaling state, stored per cone block.  For the orthant the
// scaling is diagonal; for each second-order cone it is eta * Wbar with
// Wbar = [w0 w1'; w1 I + w1 w1'/(1+w0)] and w0^2 - |w1|^2 = 1, so W and its
// inverse apply in closed form.
struct Scaling {
  const ConeDims* dims;
  Eigen::VectorXd lp_w;                 // sqrt(s_i / z_i)
  std::vector<Eigen::VectorXd> soc_w;   // unit-hyperbolic points w-bar
  std::vector<double> soc_eta;

  static double soc_res(const Eigen::Ref<const Eigen::VectorXd>& u) {
    return u[0] * u[0] - u.tail(u.size() - 1).squaredNorm();
  }

  // W u (mult=+1) or W^{-1} u (mult=-1).
  Eigen::VectorXd apply(const Eigen::VectorXd& u, int mult) const {
    Eigen::VectorXd out(u.size());
    Eigen::Index at = 0;
    for (Eigen::Index i = 0; i < dims->nonneg; ++i) {
      out[at] = (mult > 0 ? lp_w[i] : 1.0 / lp_w[i]) * u[at];
      ++at;
    }
    for (size_t k = 0; k < dims->soc.size(); ++k) {
      const Eigen::Index q = dims->soc[k];
      Eigen::VectorXd w = soc_w[k];
      double eta = soc_eta[k];
      if (mult < 0) {
        w.tail(q - 1) *= -1.0;
        eta = 1.0 / eta;
      }
      const auto u1 = u.segment(at + 1, q - 1);
      const double w1u1 = w.tail(q - 1).dot(u1);
      out[at] = eta * (w[0] * u[at] + w1u1);
      out.segment(at + 1, q - 1) =
          eta * (u1 + (u[at] + w1u1 / (1.0 + w[0])) * w.tail(q - 1));
      at += q;
    }
    return out;
  }

  bool compute(const Eigen::VectorXd& s, const Eigen::VectorXd& z) {
    lp_w.resize(dims->nonneg);
    Eigen::Index at = 0;
    for (Eigen::Index i = 0; i < dims->nonneg; ++i) {
      if (s[at] <= 0.0 || z[at] <= 0.0) return false;
      lp_w[i] = std::sqrt(s[at] / z[at]);
      ++at;
    }
    soc_w.assign(dims->soc.size(), {});
    soc_eta.assign(dims->soc.size(), 1.0);
    for (size_t k = 0; k < dims->soc.size(); ++k) {
      const Eigen::Index q = dims->soc[k];
      const auto sb = s.segment(at, q);
      const auto zb = z.segment(at, q);
      const double rs = soc_res(sb);
      const double rz = soc_res(zb);
      if (rs <= 0.0 || rz <= 0.0 || sb[0] <= 0.0 || zb[0] <= 0.0) return false;
      const Eigen::VectorXd snorm = sb / std::sqrt(rs);
      const Eigen::VectorXd znorm = zb / std::sqrt(rz);
      const double g = std::sqrt((1.0 + snorm.dot(znorm)) / 2.0);
      Eigen::VectorXd w(q);
      w[0] = (snorm[0] + znorm[0]) / (2.0 * g);
      w.tail(q - 1) =
          (snorm.tail(q - 1) - znorm.tail(q - 1)) / (2.0 * g);
      soc_w[k] = w;
      soc_eta[k] = std::pow(rs / rz, 0.25);
      at += q;
    }
    return true;
  }
};

// Jordan-algebra helpers over the cone layout.
Eigen::VectorXd cone_identity(const ConeDims& dims) {
  Eigen::VectorXd e = Eigen::VectorXd::Zero(dims.total());
  Eigen::Index at = 0;
  for (Eigen::Index i = 0; i < dims.nonneg; ++i) e[at++] = 1.0;
  for (auto q : dims.soc) {
    e[at] = 1.0;
    at += q;
  }
  return e;
}

Eigen::VectorXd jordan_product(const ConeDims& dims, const Eigen::VectorXd& u,
                               const Eigen::VectorXd& v) {
  Eigen::VectorXd out(u.size());
  Eigen::Index at = 0;
  for (Eigen::Index i = 0; i < dims.nonneg; ++i) {
    out[at] = u[at] * v[at];
    ++at;
  }
  for (auto q : dims.soc) {
    const auto u1 = u.segment(at + 1, q - 1);
    const auto v1 = v.segment(at + 1, q - 1);
    out[at] = u.segment(at, q).dot(v.segment(at, q));
    out.segment(at + 1, q - 1) = u[at] * v1 + v[at] * u1;
    at += q;
  }
  return out;
}

// Solves arrow(lambda) v = r per block.
Eigen::VectorXd jordan_solve(const ConeDims& dims, const Eigen::VectorXd& lam,
                             const Eigen::VectorXd& r) {
  Eigen::VectorXd out(r.size());
  Eigen::Index at = 0;
  for (Eigen::Index i = 0; i < dims.nonneg; ++i) {
    out[at] = r[at] / lam[at];
    ++at;
  }
  for (auto q : dims.soc) {
    const double l0 = lam[at];
    const auto l1 = lam.segment(at + 1, q - 1);
    const double det = l0 * l0 - l1.squaredNorm();
    const double v0 = (l0 * r[at] - l1.dot(r.segment(at + 1, q - 1))) / det;
    out[at] = v0;
    out.segment(at + 1, q - 1) =
        (r.segment(at + 1, q - 1) - v0 * l1) / l0;
    at += q;
  }
  return out;
}

// Largest step alpha so u + alpha du stays in the cone (capped at big).
double max_step(const ConeDims& dims, const Eigen::VectorXd& u,
                const Eigen::VectorXd& du) {
  double alpha = kInf;
  Eigen::Index at = 0;
  for (Eigen::Index i = 0; i < dims.nonneg; ++i) {
    if (du[at] < 0.0) alpha = std::min(alpha, -u[at] / du[at]);
    ++at;
  }
  for (auto q : dims.soc) {
    const double u0 = u[at];
    const auto u1 = u.segment(at + 1, q - 1);
    const double d0 = du[at];
    const auto d1 = du.segment(at + 1, q - 1);
    // roots of (u0+a d0)^2 - |u1 + a d1|^2 = 0
    const double qa = d0 * d0 - d1.squaredNorm();
    const double qb = 2.0 * (u0 * d0 - u1.dot(d1));
    const double qc = u0 * u0 - u1.squaredNorm();
    double bound = kInf;
    const double disc = qb * qb - 4.0 * qa * qc;
    if (std::abs(qa) < 1e-300) {
      if (qb < 0.0) bound = -qc / qb;
    } else if (disc >= 0.0) {
      const double sq = std::sqrt(disc);
      const double r1 = (-qb - sq) / (2.0 * qa);
      const double r2 = (-qb + sq) / (2.0 * qa);
      for (double r : {std::min(r1, r2), std::max(r1, r2)}) {
        if (r > 0.0) {
          bound = std::min(bound, r);
          break;
        }
      }
      // The quadratic admits positive roots only when the boundary is
      // actually reached going forward; verify with the height coordinate.
    }
    if (d0 < 0.0) bound = std::min(bound, -u0 / d0);
    if (bound < alpha) alpha = bound;
    at += q;
  }
  return alpha;
}

}  // namespace

ConeResult solve_cone(const Eigen::VectorXd& c, const Eigen::MatrixXd& G,
                      const Eigen::VectorXd& h, const ConeDims& dims,
                      const ConeOptions& opts) {
  const Eigen::Index n = c.size();
  const Eigen::Index m = G.rows();
  const double nu = static_cast<double>(dims.degree());
  const Eigen::VectorXd e = cone_identity(dims);

  ConeResult best;
  best.status = ConeStatus::NumericalFailure;
  double best_score = kInf;

  // Initial point: regularized least squares, then shift into the cone.
  Eigen::VectorXd x, s, z;
  {
    Eigen::MatrixXd GtG = G.transpose() * G;
    GtG.diagonal().array() += 1e-10;
    x = Eigen::LDLT<Eigen::MatrixXd>(GtG).solve(G.transpose() * h);
    s = h - G * x;
    Eigen::MatrixXd GGt = G * G.transpose();
    GGt.diagonal().array() += 1e-10;
    z = Eigen::LDLT<Eigen::MatrixXd>(GGt).solve(-G * c);
    auto min_eig = [&](const Eigen::VectorXd& u) {
      double me = kInf;
      Eigen::Index at = 0;
      for (Eigen::Index i = 0; i < dims.nonneg; ++i) me = std::min(me, u[at++]);
      for (auto q : dims.soc) {
        me = std::min(me, u[at] - u.segment(at + 1, q - 1).norm());
        at += q;
      }
      return me;
    };
    const double es = min_eig(s);
    if (es <= 0.0) s += (1.0 - es) * e;
    const double ez = min_eig(z);
    if (ez <= 0.0) z += (1.0 - ez) * e;
  }

  Scaling W;
  W.dims = &dims;

  for (int iter = 0; iter <= opts.max_iterations; ++iter) {
    const Eigen::VectorXd res_dual = G.transpose() * z + c;
    const Eigen::VectorXd res_prim = G * x + s - h;
    const double gap = s.dot(z);
    const double pobj = c.dot(x);
    const double dobj = -h.dot(z);
    const double pres = res_prim.norm() / std::max(1.0, h.norm());
    const double dres = res_dual.norm() / std::max(1.0, c.norm());
    const double rel_gap = std::abs(gap) / std::max(1.0, std::abs(pobj));

    if (std::getenv("GEOPLAN_SOCP_TRACE")) {
      std::fprintf(stderr,
                   "iter %2d  pobj % .9e dobj % .9e gap %.3e pres %.3e "
                   "dres %.3e\n",
                   iter, pobj, dobj, gap, pres, dres);
    }

    const double score = std::max({pres, dres, std::min(gap, rel_gap)});
    if (score > 100.0 * best_score && best_score < 1e-6) {
      break;  // numerics degrading past the attainable floor
    }
    if (score < best_score) {
      best_score = score;
      best.x = x;
      best.s = s;
      best.z = z;
      best.primal_obj = pobj;
      best.dual_obj = dobj;
      best.gap = gap;
      best.rel_gap = rel_gap;
      best.pres = pres;
      best.dres = dres;
      best.iterations = iter;
    }
    if (pres <= opts.feas_tol && dres <= opts.feas_tol &&
        (gap <= opts.gap_tol || rel_gap <= opts.rel_gap_tol)) {
      best.status = ConeStatus::Optimal;
      return best;
    }
    if (iter == opts.max_iterations) break;

    if (!W.compute(s, z)) break;
    const Eigen::VectorXd lambda = W.apply(z, +1);
    const double mu = gap / nu;

    // Augmented KKT  [0 G'; G -W^2]  factorized once per iteration.  The
    // W^2 blocks have closed forms: diag(w^2) on the orthant and
    // eta^2 (2 wbar wbar' - J) per second-order cone.
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n + m, n + m);
    K.topRightCorner(n, m) = G.transpose();
    K.bottomLeftCorner(m, n) = G;
    {
      Eigen::Index at = 0;
      for (Eigen::Index i = 0; i < dims.nonneg; ++i) {
        K(n + at, n + at) = -W.lp_w[i] * W.lp_w[i];
        ++at;
      }
      for (size_t k = 0; k < dims.soc.size(); ++k) {
        const Eigen::Index q = dims.soc[k];
        const double e2 = W.soc_eta[k] * W.soc_eta[k];
        const Eigen::VectorXd& w = W.soc_w[k];
        Eigen::MatrixXd blk = 2.0 * (w * w.transpose());
        blk(0, 0) -= 1.0;
        for (Eigen::Index i = 1; i < q; ++i) blk(i, i) += 1.0;
        K.block(n + at, n + at, q, q) = -e2 * blk;
        at += q;
      }
    }
    K.diagonal().head(n).array() += 1e-13;
    K.diagonal().tail(m).array() -= 1e-13;
    Eigen::PartialPivLU<Eigen::MatrixXd> Klu(K);

    // Direction solve shared by predictor and corrector:
    //   G' dz = r1;  G dx + ds = r2;  lambda o (W dz + W^{-T} ds) = dcomp
    auto solve_dir = [&](const Eigen::VectorXd& r1, const Eigen::VectorXd& r2,
                         const Eigen::VectorXd& dcomp, Eigen::VectorXd& dx,
                         Eigen::VectorXd& dz, Eigen::VectorXd& ds) {
      const Eigen::VectorXd v = jordan_solve(dims, lambda, dcomp);
      const Eigen::VectorXd wv = W.apply(v, +1);
      Eigen::VectorXd rhs(n + m);
      rhs.head(n) = r1;
      rhs.tail(m) = r2 - wv;  // G dx - W^2 dz = r2 - W v
      Eigen::VectorXd sol = Klu.solve(rhs);
      for (int pass = 0; pass < 2; ++pass) {
        Eigen::VectorXd resid = rhs;
        resid.head(n) -= G.transpose() * sol.tail(m);
        resid.tail(m) -=
            G * sol.head(n) - W.apply(W.apply(sol.tail(m), +1), +1);
        if (resid.lpNorm<Eigen::Infinity>() <
            1e-14 * (1.0 + rhs.lpNorm<Eigen::Infinity>())) {
          break;
        }
        sol += Klu.solve(resid);
      }
      dx = sol.head(n);
      dz = sol.tail(m);
      ds = r2 - G * dx;
    };

    Eigen::VectorXd dxa(n), dza(m), dsa(m);
    solve_dir(-res_dual, -res_prim, -jordan_product(dims, lambda, lambda),
              dxa, dza, dsa);

    double alpha_a = std::min(
        1.0, std::min(max_step(dims, s, dsa), max_step(dims, z, dza)));
    const double gap_a = (s + alpha_a * dsa).dot(z + alpha_a * dza);
    double sigma = std::pow(std::max(0.0, gap_a / gap), 3.0);
    sigma = std::min(1.0, std::max(0.0, sigma));

    const Eigen::VectorXd corr = jordan_product(
        dims, W.apply(dsa, -1), W.apply(dza, +1));
    const Eigen::VectorXd dcomp = -jordan_product(dims, lambda, lambda) -
                                  corr + sigma * mu * e;

    Eigen::VectorXd dx(n), dz(m), ds(m);
    solve_dir(-res_dual, -res_prim, dcomp, dx, dz, ds);

    double alpha = std::min(max_step(dims, s, ds), max_step(dims, z, dz));
    alpha = std::min(1.0, 0.99 * alpha);
    if (!(alpha > 0.0) || !dx.allFinite() || !ds.allFinite() ||
        !dz.allFinite()) {
      break;
    }
    x += alpha * dx;
    s += alpha * ds;
    z += alpha * dz;
  }

  if (best.pres <= 1e-7 && best.dres <= 1e-7 &&
      (best.gap <= 1e-7 || best.rel_gap <= 1e-8)) {
    best.status = ConeStatus::MaxIterations;
  } else {
    best.status = ConeStatus::NumericalFailure;
  }
  return best;
}

}  // namespace geoplan::solvers
