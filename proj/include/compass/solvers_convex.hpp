#pragma once

#include "compass/line_search.hpp"
#include "compass/problem.hpp"
#include "compass/prox.hpp"

namespace compass {

// Geometric descent without strong convexity.  A single sequence of
// forward-backward anchors zbar_k decreases F, while the centers y_k
// follow aggregated gradient mapping steps with weights (k+1)/(2L).
// For convex f the potential
//   ||y_{k+1} - x*||^2 + (k+1)(k+2) (F(zbar_k) - F*) / (2L)
// never increases, which yields the 1/k^2 value rate.  With the
// safeguard enabled each step also decreases F by at least
// ||G(zbar_{k-1})||^2 / (2L), so the smallest mapping norm seen decays
// like 1/sqrt(k) even when f is nonconvex.

struct gd_convex_state {
  int k = 0;     // completed iterations
  dvec z;        // accepted line-search point of the last step
  dvec zbar;     // its forward-backward anchor
  dvec y;        // aggregated center, equals y_{k+1}
  double F_zbar = 0.0;
  double Gz_norm = 0.0;     // ||G(z_k)||
  double Gzbar_norm = 0.0;  // ||G(zbar_{k-1})|| measured by the last step
  double best_G_norm = 0.0; // smallest anchor mapping norm seen so far
  bool fell_back = false;   // last step rejected the line-search point
};

gd_convex_state gd_convex_init(const problem& p, const dvec& x0);

// One iteration.  With safeguard set, the candidate from the line search
// is kept only if it decreases F(zbar) by ||G(zbar_{k-1})||^2 / (2L);
// otherwise the step falls back to a plain forward-backward step from
// the previous anchor, which always achieves that decrease.
void gd_convex_step(const problem& p, gd_convex_state& st, bool safeguard = true,
                    double ls_tol = 1e-8);

// FISTA.  Momentum weights follow the classic recurrence
// a_k = (1 + sqrt(1 + 4 a_{k-1}^2)) / 2 starting from a_0 = 1.
struct fista_state {
  int k = 0;
  dvec x, x_prev, w;
  double a = 1.0;       // a_k
  double a_prev = 1.0;  // a_{k-1}
  double Gw_norm = 0.0; // mapping norm at the w that produced x
};

fista_state fista_init(const problem& p, const dvec& x0);
void fista_step(const problem& p, fista_state& st);

// Auxiliary center making FISTA comparable to geometric descent:
// y_0 = x_0 and y_k = x_k + a_k (w_k - x_k) afterwards.
dvec fista_audit_y(const fista_state& st);

// ||y - x*||^2 + k (k+1) (F_val - Fstar) / (2L), the quantity both
// convex methods drive down.  F_val is the objective at the anchor
// paired with y (zbar_{k-1} for geometric descent, x_k for FISTA).
double convex_potential(const problem& p, const dvec& y, double F_val, int k,
                        const dvec& xstar, double Fstar);

}  // namespace compass
