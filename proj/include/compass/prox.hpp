#pragma once

#include "compass/problem.hpp"

namespace compass {

// Proximal map of t*psi at x.  For the indicators this is the metric
// projection (independent of t); for l1 it is soft thresholding at t*weight.
dvec prox(const simple_term& psi, const dvec& x, double t);

// One forward-backward step from x with stepsize t, together with the
// gradient mapping G_t(x) = (x - xbar)/t.
struct prox_grad_result {
  dvec xbar;
  dvec G;
  double Gnorm = 0.0;
  double t = 0.0;
};

prox_grad_result forward_backward(const problem& p, const dvec& x, double t);

// Everything downstream uses the canonical stepsize 1/L.
inline prox_grad_result prox_gradient(const problem& p, const dvec& x) {
  return forward_backward(p, x, 1.0 / p.f.L);
}

// ||v|| <= 2 ||G_{1/L}(x)|| for some subgradient v of F at xbar, so this
// certifies near-stationarity of the forward-backward point.
double stationarity_bound(const problem& p, const dvec& x);

// Checks F(xbar) <= F(x) - ||G_{1/L}(x)||^2 / (2L), which needs smoothness
// but not convexity.  Slack scales with |F(x)|.
struct descent_report {
  double lhs = 0.0;
  double rhs = 0.0;
  bool ok = false;
};

descent_report descent_check(const problem& p, const dvec& x);

}  // namespace compass
