#include "compass/prox.hpp"

#include "compass/kernels.hpp"

#include <cmath>

namespace compass {

dvec prox(const simple_term& psi, const dvec& x, double t) {
  if (!(t > 0.0) || !std::isfinite(t))
    throw precondition_error("prox stepsize must be positive and finite");
  ensure_finite(x, "prox input");
  switch (psi.kind) {
    case psi_kind::zero:
      return x;
    case psi_kind::ball: {
      double nx = x.norm();
      if (nx <= psi.delta) return x;
      return x * (psi.delta / nx);
    }
    case psi_kind::box: {
      ensure_size(x, psi.lower.size(), "prox input");
      dvec z;
      kernels::clamp(x, psi.lower, psi.upper, z);
      return z;
    }
    case psi_kind::l1: {
      dvec z;
      kernels::soft_threshold(x, t * psi.weight, z);
      return z;
    }
  }
  return x;
}

prox_grad_result forward_backward(const problem& p, const dvec& x, double t) {
  ensure_size(x, p.dim(), "x");
  prox_grad_result r;
  r.t = t;
  dvec v = x - t * p.f.gradient(x);
  r.xbar = prox(p.psi, v, t);
  r.G = (x - r.xbar) / t;
  r.Gnorm = r.G.norm();
  return r;
}

double stationarity_bound(const problem& p, const dvec& x) {
  return 2.0 * prox_gradient(p, x).Gnorm;
}

descent_report descent_check(const problem& p, const dvec& x) {
  prox_grad_result pg = prox_gradient(p, x);
  descent_report rep;
  rep.lhs = eval_F(p, pg.xbar);
  double Fx = eval_F(p, x);
  rep.rhs = Fx - pg.Gnorm * pg.Gnorm / (2.0 * p.f.L);
  if (std::isinf(Fx)) {
    rep.rhs = Fx;
    rep.ok = true;
    return rep;
  }
  rep.ok = rep.lhs <= rep.rhs + 1e-10 * (1.0 + std::abs(Fx));
  return rep;
}

}  // namespace compass
