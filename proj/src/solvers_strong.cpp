#include "compass/solvers_strong.hpp"

#include "compass/geometry.hpp"

#include <cmath>

namespace compass {

namespace {

void require_strongly_convex(const problem& p, const char* who) {
  if (!(p.f.alpha > 0.0))
    throw precondition_error(std::string(who) + ": needs alpha > 0");
}

}  // namespace

gd_strong_state gd_strong_init(const problem& p, const dvec& x0) {
  require_strongly_convex(p, "gd_strong_init");
  ensure_size(x0, p.dim(), "x0");

  const double L = p.f.L;
  const double a = p.f.alpha;

  gd_strong_state st;
  st.z = x0;
  prox_grad_result pg = prox_gradient(p, x0);
  st.zbar = pg.xbar;
  st.F_zbar = eval_F(p, st.zbar);
  st.Gz_norm = pg.Gnorm;

  // Center the first ball at the strong convexity minimizer estimate and
  // size it from one gradient mapping evaluation.
  st.y = x0 - pg.G / a;
  st.xi_sq = (1.0 / (a * a) - 1.0 / (L * a)) * pg.Gnorm * pg.Gnorm;
  st.sigma_sq = st.xi_sq;
  st.rho_sq = st.xi_sq;
  return st;
}

void gd_strong_step(const problem& p, gd_strong_state& st, double ls_tol) {
  const double L = p.f.L;
  const double a = p.f.alpha;
  const double q = a / L;

  // The search segment runs from the last forward-backward point to the
  // current center.  When the two coincide the search is vacuous.
  const dvec& x_arg = st.zbar;
  double seg = (st.y - x_arg).norm();
  dvec z;
  if (seg <= 1e-14 * (1.0 + st.y.norm())) {
    z = st.y;
  } else {
    z = find_z(p, x_arg, st.y, ls_tol).z;
  }

  prox_grad_result pg = prox_gradient(p, z);
  const double gn2 = pg.Gnorm * pg.Gnorm;

  // The two balls both contain the minimizer: one from strong convexity
  // around the shifted point z - G/a, one from shrinking the previous
  // ball by the guaranteed descent at zbar(z).
  const double delta_sq = gn2 / (a * a);
  const double rho_sq = (1.0 - q) * delta_sq;
  const double sigma_sq = std::max(st.xi_sq - q * delta_sq, 0.0);

  double lambda = 0.0;
  double xi_next = rho_sq;
  if (delta_sq > 0.0 && sigma_sq <= rho_sq + delta_sq) {
    // Optimal combination weight; lambda <= 1 holds because
    // rho_sq <= delta_sq and sigma_sq >= 0.
    lambda = (delta_sq + rho_sq - sigma_sq) / (2.0 * delta_sq);
    const double diff = rho_sq - sigma_sq;
    xi_next = 0.5 * rho_sq + 0.5 * sigma_sq - 0.25 * delta_sq -
              diff * diff / (4.0 * delta_sq);
  }

  dvec zz = z - pg.G / a;
  st.y = (1.0 - lambda) * zz + lambda * st.y;
  st.xi_sq = std::max(xi_next, 0.0);
  st.lambda = lambda;
  st.sigma_sq = sigma_sq;
  st.rho_sq = rho_sq;
  st.z = z;
  st.zbar = pg.xbar;
  st.F_zbar = eval_F(p, st.zbar);
  st.Gz_norm = pg.Gnorm;
  st.k += 1;
}

ag_state ag_init(const problem& p, const dvec& x0) {
  require_strongly_convex(p, "ag_init");
  ensure_size(x0, p.dim(), "x0");

  ag_state st;
  st.kappa = p.f.L / p.f.alpha;
  const double rk = std::sqrt(st.kappa);
  st.theta = (rk - 1.0) / (rk + 1.0);
  st.x = x0;
  st.x_prev = x0;
  st.w = x0;
  return st;
}

void ag_step(const problem& p, ag_state& st) {
  prox_grad_result pg = prox_gradient(p, st.w);
  st.Gw_norm = pg.Gnorm;
  st.x_prev = st.x;
  st.x = pg.xbar;
  st.w = st.x + st.theta * (st.x - st.x_prev);
  st.k += 1;
}

dvec ag_y_closed_form(const ag_state& st) {
  const double rk = std::sqrt(st.kappa);
  return (rk + 1.0) * st.w - rk * st.x;
}

ag_audit_state ag_audit_init_exact(const problem& p, const dvec& x0, const dvec& xstar,
                                   double Fstar) {
  require_strongly_convex(p, "ag_audit_init_exact");
  ag_audit_state st;
  st.y = x0;
  st.sigma_sq =
      (x0 - xstar).squaredNorm() + 2.0 * (eval_F(p, x0) - Fstar) / p.f.alpha;
  return st;
}

ag_audit_state ag_audit_init(const problem& p, const dvec& x0) {
  require_strongly_convex(p, "ag_audit_init");
  const double a = p.f.alpha;
  const double L = p.f.L;

  // One forward-backward evaluation bounds both the distance to the
  // minimizer and the value gap.  With xi the radius certified around
  // x0 - G/a, the triangle inequality gives
  //   ||x0 - x*||^2 <= (||G||/a + xi)^2
  // and the value gap at x0 splits through the descent at xbar:
  //   F(x0) - F* <= (F(x0) - F(xbar)) + (F(xbar) - F*)
  //             <= (F(x0) - F(xbar)) + a xi^2 / 2.
  prox_grad_result pg = prox_gradient(p, x0);
  const double gn = pg.Gnorm;
  const double xi_sq = std::max((1.0 / (a * a) - 1.0 / (L * a)) * gn * gn, 0.0);
  const double xi = std::sqrt(xi_sq);
  const double gap0 = std::max(eval_F(p, x0) - eval_F(p, pg.xbar), 0.0);

  ag_audit_state st;
  st.y = x0;
  const double dist = gn / a + xi;
  st.sigma_sq = dist * dist + xi_sq + 2.0 * gap0 / a;
  return st;
}

void ag_audit_step(const problem& p, ag_audit_state& st, const dvec& w_k, const dvec& x_k) {
  const double a = p.f.alpha;
  const double rk = std::sqrt(p.f.L / a);
  const double rk_inv = 1.0 / rk;

  prox_grad_result pg = prox_gradient(p, w_k);
  dvec ww = w_k - pg.G / a;

  double next = (1.0 - rk_inv) * st.sigma_sq -
                (rk - rk_inv) * (w_k - x_k).squaredNorm();
  st.y = rk_inv * ww + (1.0 - rk_inv) * st.y;
  st.sigma_sq = std::max(next, 0.0);
  st.k += 1;
}

}  // namespace compass
