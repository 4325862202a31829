#pragma once

#include "compass/line_search.hpp"
#include "compass/problem.hpp"
#include "compass/prox.hpp"

namespace compass {

// Geometric descent for alpha-strongly convex problems.  The state keeps
// a certified squared radius xi_sq with the invariant
//   xi_sq >= ||y - x*||^2 + 2 (F(zbar) - F*) / alpha,
// and each step shrinks it by at least the factor 1 - sqrt(alpha/L).

struct gd_strong_state {
  int k = 0;          // completed iterations
  dvec z;             // line-search point of the last iteration (x0 initially)
  dvec zbar;          // forward-backward point of z
  dvec y;             // current ball center estimate
  double xi_sq = 0.0; // certified squared radius
  double F_zbar = 0.0;
  double Gz_norm = 0.0;   // ||G_{1/L}(z)||
  double lambda = 0.0;    // combination weight chosen by the last step
  double sigma_sq = 0.0;  // shrunk radius used on the y-ball side
  double rho_sq = 0.0;    // radius of the strong convexity ball
};

gd_strong_state gd_strong_init(const problem& p, const dvec& x0);
void gd_strong_step(const problem& p, gd_strong_state& st, double ls_tol = 1e-8);

// Accelerated forward-backward iteration with the fixed momentum
// theta = (sqrt(kappa) - 1)/(sqrt(kappa) + 1), kappa = L/alpha.
struct ag_state {
  int k = 0;
  dvec x, x_prev, w;
  double theta = 0.0;
  double kappa = 0.0;
  double Gw_norm = 0.0;  // gradient mapping norm at the w that produced x
};

ag_state ag_init(const problem& p, const dvec& x0);
void ag_step(const problem& p, ag_state& st);

// Side-car audit certifying the accelerated method through the same ball
// potential as geometric descent.  Feeding the current (w, x) pair moves
// the audit from index k to k+1, so advance it right before the step
// that produces x_{k+1}; the invariant
//   sigma_sq >= ||y - x*||^2 + 2 (F(x) - F*) / alpha
// then holds with the new iterate, and sigma_sq shrinks by at least the
// factor 1 - 1/sqrt(kappa).
struct ag_audit_state {
  int k = 0;
  dvec y;
  double sigma_sq = 0.0;
};

// Initialization from a known optimum (reference runs and tests).
ag_audit_state ag_audit_init_exact(const problem& p, const dvec& x0, const dvec& xstar,
                                   double Fstar);
// Computable initialization: a valid upper bound on the potential at x0
// assembled from one gradient mapping evaluation.
ag_audit_state ag_audit_init(const problem& p, const dvec& x0);

void ag_audit_step(const problem& p, ag_audit_state& st, const dvec& w_k, const dvec& x_k);

// The audit center admits a closed form in the current iterates:
// y_k = (sqrt(kappa) + 1) w_k - sqrt(kappa) x_k.
dvec ag_y_closed_form(const ag_state& st);

}  // namespace compass
