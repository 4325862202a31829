#pragma once

#include "compass/problem.hpp"

#include <vector>

namespace compass {

// Affine set c + range(V) with V orthonormal and c orthogonal to range(V).
// Grows one direction at a time; directions that are numerically dependent
// on the current span are dropped.
struct affine_span {
  dmat V;
  dvec c;

  explicit affine_span(const dvec& anchor);

  Eigen::Index ambient() const { return c.size(); }
  Eigen::Index dim() const { return V.cols(); }

  // Appends the component of d orthogonal to the span (two-pass
  // Gram-Schmidt).  Returns false and leaves the set unchanged when d is
  // already contained up to a relative 1e-10.
  bool add(const dvec& d);

  // Closest point of the set to p.
  dvec project(const dvec& p) const;
};

// Exact minimizer of F over the affine set, for quadratic smooth parts
// with no extra term, a ball indicator, or an l1 term.  The ball case
// reduces to a small trust-region problem in the span coordinates; the
// l1 case is solved by an alternating splitting iteration driven to
// solve_tol.
dvec minimize_over(const problem& p, const affine_span& M, double solve_tol = 1e-12);

// Reference runs of the subspace framework both practical algorithms
// shadow.  Each iteration projects the known optimum onto the current
// affine set, minimizes F over it, locates the balance point z of the
// gradient mapping on the segment between them, and widens the set with
// the mapping directions.  Unimplementable as an algorithm (it consumes
// x*), invaluable as an executable model.
struct ia_options {
  int iters = 20;
  double ls_tol = 1e-10;     // balance point accuracy on the segment
  double solve_tol = 1e-12;  // inner subspace minimization accuracy
  double g_stop = 0.0;       // finish early once ||G(x_k)|| falls below this (0 disables)
};

struct ia_record {
  dvec y;           // projection of x* onto the set
  dvec x;           // minimizer of F over the set
  dvec z;           // balance point on [x, y]
  dvec xbar;        // forward-backward point of x
  double F_x = 0.0;
  double F_xbar = 0.0;
  double Gx_norm = 0.0;
  double Gz_norm = 0.0;
  Eigen::Index subspace_dim = 0;
};

struct ia_result {
  std::vector<ia_record> steps;
};

// Strongly convex variant: the set gains span{G(z_k)} each iteration and
// the potential ||y_k - x*||^2 + 2 (F(x_k) - F*) / alpha contracts by
// 1 - sqrt(alpha/L).
ia_result ia_strong_run(const problem& p, const dvec& x0, const dvec& xstar,
                        const ia_options& opt = {});

// Convex and nonconvex variant: the set gains span{G(z_k), G(x_k)}.  For
// convex f the potential ||y_k - x*||^2 + k(k+1)(F(x_k) - F*)/(2L) never
// increases; without convexity F(xbar_k) still falls by
// ||G(x_k)||^2 / (2L) per iteration.
ia_result ia_convex_run(const problem& p, const dvec& x0, const dvec& xstar,
                        const ia_options& opt = {});

}  // namespace compass
