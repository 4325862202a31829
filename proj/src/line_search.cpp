#include "compass/line_search.hpp"

#include <cmath>
#include <limits>

namespace compass {

namespace {

struct probe {
  double h = 0.0;
  dvec z;
  prox_grad_result pg;
};

probe eval_at(const problem& p, const dvec& x, const dvec& d, double s) {
  probe pr;
  pr.z = x + s * d;
  pr.pg = prox_gradient(p, pr.z);
  pr.h = pr.pg.G.dot(d);
  return pr;
}

}  // namespace

double hbar(const problem& p, const dvec& x, const dvec& y, double s) {
  ensure_size(y, x.size(), "y");
  dvec d = y - x;
  if (d.norm() == 0.0) throw precondition_error("hbar needs distinct endpoints");
  return eval_at(p, x, d, s).h;
}

z_search_result find_z(const problem& p, const dvec& x, const dvec& y, double tol) {
  ensure_size(x, p.dim(), "x");
  ensure_size(y, p.dim(), "y");
  dvec d = y - x;
  double dd = d.squaredNorm();
  if (dd == 0.0) throw precondition_error("find_z needs distinct endpoints");
  if (!(tol > 0.0)) throw precondition_error("tolerance must be positive");
  const double slack = tol * p.f.L * dd;

  auto finish = [&](probe&& pr, double s, int evals) {
    z_search_result r;
    r.z = std::move(pr.z);
    r.pg = std::move(pr.pg);
    r.s = s;
    r.residual = std::abs(pr.h);
    r.evals = evals;
    return r;
  };

  // endpoint probes use the endpoint vectors themselves, so an accepted
  // endpoint is returned without the rounding of x + s (y - x)
  auto eval_endpoint = [&](const dvec& z) {
    probe pr;
    pr.z = z;
    pr.pg = prox_gradient(p, pr.z);
    pr.h = pr.pg.G.dot(d);
    return pr;
  };

  int evals = 0;
  probe at1 = eval_endpoint(y);
  ++evals;
  if (at1.h <= slack) return finish(std::move(at1), 1.0, evals);
  probe at0 = eval_endpoint(x);
  ++evals;
  if (at0.h >= -slack) return finish(std::move(at0), 0.0, evals);

  // hbar(0) < 0 < hbar(1): shrink the bracket keeping those signs.
  // Near convergence the rounding floor of hbar can sit above the
  // requested slack, so once the bracket collapses to machine width the
  // best probe seen is as close to the crossing as doubles allow and is
  // returned with its honest residual.
  double lo = 0.0, hi = 1.0;
  probe best = std::move(at0);
  double best_s = 0.0, best_res = std::abs(best.h);
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    probe pm = eval_at(p, x, d, mid);
    ++evals;
    double res = std::abs(pm.h);
    if (res <= slack) return finish(std::move(pm), mid, evals);
    if (res < best_res) {
      best_res = res;
      best_s = mid;
      best = pm;
    }
    if (pm.h < 0.0)
      lo = mid;
    else
      hi = mid;
    if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon())
      return finish(std::move(best), best_s, evals);
  }
  throw line_search_error("bisection exhausted its budget", best_s, best_res);
}

}  // namespace compass
