#include "compass/solvers_convex.hpp"

#include <cmath>
#include <limits>

namespace compass {

gd_convex_state gd_convex_init(const problem& p, const dvec& x0) {
  ensure_size(x0, p.dim(), "x0");

  gd_convex_state st;
  st.z = x0;
  prox_grad_result pg = prox_gradient(p, x0);
  st.zbar = pg.xbar;
  st.F_zbar = eval_F(p, st.zbar);
  st.y = x0;
  st.Gz_norm = pg.Gnorm;
  st.Gzbar_norm = pg.Gnorm;
  st.best_G_norm = std::numeric_limits<double>::infinity();
  return st;
}

void gd_convex_step(const problem& p, gd_convex_state& st, bool safeguard,
                    double ls_tol) {
  const double L = p.f.L;
  const int k = st.k + 1;  // index of the step being taken

  // Mapping at the previous anchor.  The safeguard compares against the
  // decrease this anchor could achieve on its own.
  prox_grad_result pg_prev = prox_gradient(p, st.zbar);
  st.Gzbar_norm = pg_prev.Gnorm;
  st.best_G_norm = std::min(st.best_G_norm, pg_prev.Gnorm);

  dvec z;
  double seg = (st.y - st.zbar).norm();
  if (seg <= 1e-14 * (1.0 + st.y.norm())) {
    z = st.y;
  } else {
    z = find_z(p, st.zbar, st.y, ls_tol).z;
  }

  prox_grad_result pg = prox_gradient(p, z);
  dvec zbar_next = pg.xbar;
  double F_next = eval_F(p, zbar_next);
  st.fell_back = false;

  if (safeguard) {
    double need = st.F_zbar - pg_prev.Gnorm * pg_prev.Gnorm / (2.0 * L);
    double slack = 1e-12 * (1.0 + std::abs(st.F_zbar));
    if (F_next > need + slack) {
      // Discard the candidate; a forward-backward step from the previous
      // anchor is guaranteed to decrease enough.
      z = st.zbar;
      pg = pg_prev;
      zbar_next = pg_prev.xbar;
      F_next = eval_F(p, zbar_next);
      st.fell_back = true;
    }
  }

  const double gamma = (k + 1) / (2.0 * L);
  st.y -= gamma * pg.G;
  st.z = z;
  st.zbar = zbar_next;
  st.F_zbar = F_next;
  st.Gz_norm = pg.Gnorm;
  st.k = k;
}

fista_state fista_init(const problem& p, const dvec& x0) {
  ensure_size(x0, p.dim(), "x0");
  fista_state st;
  st.x = x0;
  st.x_prev = x0;
  st.w = x0;
  return st;
}

void fista_step(const problem& p, fista_state& st) {
  prox_grad_result pg = prox_gradient(p, st.w);
  st.Gw_norm = pg.Gnorm;
  st.x_prev = st.x;
  st.x = pg.xbar;

  st.a_prev = st.a;
  st.a = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * st.a_prev * st.a_prev));
  st.w = st.x + ((st.a_prev - 1.0) / st.a) * (st.x - st.x_prev);
  st.k += 1;
}

dvec fista_audit_y(const fista_state& st) {
  if (st.k == 0) return st.x;
  return st.x + st.a * (st.w - st.x);
}

double convex_potential(const problem& p, const dvec& y, double F_val, int k,
                        const dvec& xstar, double Fstar) {
  return (y - xstar).squaredNorm() +
         static_cast<double>(k) * (k + 1) * (F_val - Fstar) / (2.0 * p.f.L);
}

}  // namespace compass
