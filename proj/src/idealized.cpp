#include "compass/idealized.hpp"

#include "compass/kernels.hpp"
#include "compass/line_search.hpp"
#include "compass/prox.hpp"
#include "compass/trs.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace compass {

affine_span::affine_span(const dvec& anchor) : V(anchor.size(), 0), c(anchor) {
  ensure_finite(anchor, "anchor");
}

bool affine_span::add(const dvec& d) {
  ensure_size(d, ambient(), "direction");
  double dn = d.norm();
  if (dn == 0.0) return false;

  dvec r = d;
  if (V.cols() > 0) {
    r -= V * (V.transpose() * r);
    r -= V * (V.transpose() * r);
  }
  double rn = r.norm();
  if (rn <= 1e-10 * dn) return false;

  V.conservativeResize(Eigen::NoChange, V.cols() + 1);
  V.col(V.cols() - 1) = r / rn;
  c -= V.col(V.cols() - 1) * V.col(V.cols() - 1).dot(c);
  return true;
}

dvec affine_span::project(const dvec& p) const {
  ensure_size(p, ambient(), "point");
  if (V.cols() == 0) return c;
  return c + V * (V.transpose() * p);
}

namespace {

// Coordinates of the smooth part restricted to the affine set:
// f(c + V u) = u'Bu/2 - g'u + const.
struct reduced_quadratic {
  dmat B;
  dvec g;
};

reduced_quadratic reduce(const quadratic_data& qd, const affine_span& M) {
  reduced_quadratic r;
  const Eigen::Index m = M.dim();
  dmat AV(M.ambient(), m);
  for (Eigen::Index j = 0; j < m; ++j) AV.col(j) = qd.multiply(M.V.col(j));
  r.B = M.V.transpose() * AV;
  r.B = 0.5 * (r.B + r.B.transpose()).eval();
  r.g = M.V.transpose() * (qd.b - qd.multiply(M.c));
  return r;
}

// Pseudo-solve of B u = g through an eigendecomposition.  Small systems
// only; rejects inconsistent or unbounded instances.
dvec solve_reduced_linear(const dmat& B, const dvec& g) {
  if (B.rows() == 0) return dvec(0);
  Eigen::SelfAdjointEigenSolver<dmat> es(B);
  const dvec& lam = es.eigenvalues();
  double scale = std::max(std::abs(lam(0)), std::abs(lam(lam.size() - 1)));
  double floor = 1e-12 * std::max(scale, 1.0);

  dvec gt = es.eigenvectors().transpose() * g;
  dvec ut(gt.size());
  for (Eigen::Index i = 0; i < gt.size(); ++i) {
    if (lam(i) > floor) {
      ut(i) = gt(i) / lam(i);
    } else {
      if (std::abs(gt(i)) > 1e-10 * (1.0 + g.norm()))
        throw precondition_error("subspace minimization is unbounded below");
      ut(i) = 0.0;
    }
  }
  return es.eigenvectors() * ut;
}

// Splitting iteration for min u'Bu/2 - g'u + weight ||c + V u||_1.
dvec solve_reduced_l1(const reduced_quadratic& rq, const affine_span& M, double weight,
                      double tol) {
  Eigen::SelfAdjointEigenSolver<dmat> es(rq.B);
  const dvec& lam = es.eigenvalues();
  const dmat& Q = es.eigenvectors();
  double lam_max = lam.size() ? std::max(std::abs(lam(0)), std::abs(lam(lam.size() - 1))) : 0.0;
  if (lam.size() && lam(0) < -1e-10 * std::max(lam_max, 1.0))
    throw precondition_error("l1 subspace minimization needs convex curvature");

  const double rho = std::max(1.0, lam_max);
  dvec x = M.c;
  dvec w = x, v = dvec::Zero(M.ambient());
  dvec u = dvec::Zero(M.dim());

  const int cap = 200000;
  for (int it = 0; it < cap; ++it) {
    dvec rhs = rq.g + rho * (M.V.transpose() * (w - v));
    dvec rt = Q.transpose() * rhs;
    for (Eigen::Index i = 0; i < rt.size(); ++i) rt(i) /= lam(i) + rho;
    u = Q * rt;
    x = M.c + M.V * u;

    dvec w_old = w;
    kernels::soft_threshold(x + v, weight / rho, w);
    v += x - w;

    double scale = 1.0 + x.lpNorm<Eigen::Infinity>();
    double primal = (x - w).lpNorm<Eigen::Infinity>();
    double dual = rho * (w - w_old).lpNorm<Eigen::Infinity>();
    if (primal <= tol * scale && dual <= tol * scale) return x;
  }
  throw no_convergence_error("l1 subspace minimization stalled");
}

}  // namespace

dvec minimize_over(const problem& p, const affine_span& M, double solve_tol) {
  if (!p.quad) throw precondition_error("minimize_over: needs a quadratic smooth part");
  const quadratic_data& qd = *p.quad;
  reduced_quadratic rq = reduce(qd, M);

  switch (p.psi.kind) {
    case psi_kind::zero:
      return M.c + M.V * solve_reduced_linear(rq.B, rq.g);
    case psi_kind::ball: {
      // c is orthogonal to the span, so the ball cuts the set in a
      // sphere of this reduced radius around u = 0.
      double rr = p.psi.delta * p.psi.delta - M.c.squaredNorm();
      if (rr < 0.0) {
        if (rr < -1e-12 * (1.0 + p.psi.delta * p.psi.delta))
          throw precondition_error("affine set misses the ball");
        rr = 0.0;
      }
      if (M.dim() == 0) return M.c;
      dense_trs_result r = dense_trs_small(rq.B, rq.g, std::sqrt(rr));
      return M.c + M.V * r.x;
    }
    case psi_kind::l1:
      if (M.dim() == 0) return M.c;
      return solve_reduced_l1(rq, M, p.psi.weight, solve_tol);
    case psi_kind::box:
      throw precondition_error("minimize_over: box constraints unsupported");
  }
  throw std::logic_error("minimize_over: unreachable");
}

namespace {

ia_result ia_run(const problem& p, const dvec& x0, const dvec& xstar, const ia_options& opt,
                 bool widen_with_x) {
  if (!p.quad) throw precondition_error("idealized run: needs a quadratic smooth part");
  ensure_size(x0, p.dim(), "x0");
  ensure_size(xstar, p.dim(), "xstar");

  affine_span M(x0);
  prox_grad_result pg0 = prox_gradient(p, x0);
  M.add(pg0.G);

  ia_result out;
  out.steps.reserve(opt.iters);
  for (int k = 1; k <= opt.iters; ++k) {
    ia_record rec;
    rec.y = M.project(xstar);
    rec.x = minimize_over(p, M, opt.solve_tol);

    double seg = (rec.y - rec.x).norm();
    if (seg <= 1e-14 * (1.0 + rec.y.norm())) {
      rec.z = rec.x;
    } else {
      rec.z = find_z(p, rec.x, rec.y, opt.ls_tol).z;
    }

    prox_grad_result pg_x = prox_gradient(p, rec.x);
    prox_grad_result pg_z = prox_gradient(p, rec.z);
    rec.xbar = pg_x.xbar;
    rec.F_x = eval_F(p, rec.x);
    rec.F_xbar = eval_F(p, rec.xbar);
    rec.Gx_norm = pg_x.Gnorm;
    rec.Gz_norm = pg_z.Gnorm;
    rec.subspace_dim = M.dim();
    double g_now = rec.Gx_norm;
    out.steps.push_back(std::move(rec));
    if (opt.g_stop > 0.0 && g_now <= opt.g_stop) break;

    M.add(pg_z.G);
    if (widen_with_x) M.add(pg_x.G);
  }
  return out;
}

}  // namespace

ia_result ia_strong_run(const problem& p, const dvec& x0, const dvec& xstar,
                        const ia_options& opt) {
  if (!(p.f.alpha > 0.0)) throw precondition_error("ia_strong_run: needs alpha > 0");
  return ia_run(p, x0, xstar, opt, false);
}

ia_result ia_convex_run(const problem& p, const dvec& x0, const dvec& xstar,
                        const ia_options& opt) {
  return ia_run(p, x0, xstar, opt, true);
}

}  // namespace compass
