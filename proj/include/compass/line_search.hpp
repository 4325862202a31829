#pragma once

#include "compass/problem.hpp"
#include "compass/prox.hpp"

namespace compass {

// Directional value of the gradient mapping along the segment from x to y:
//   hbar(s) = G_{1/L}(x + s (y - x))' (y - x).
// It changes sign somewhere on [0, 1] (it is continuous and 3 L ||y - x||^2
// Lipschitz in s), which is what the bisection below exploits.
double hbar(const problem& p, const dvec& x, const dvec& y, double s);

struct z_search_result {
  dvec z;
  double s = 0.0;           // position along the segment
  prox_grad_result pg;      // gradient mapping data at z, stepsize 1/L
  double residual = 0.0;    // |hbar(s)| at the accepted point
  int evals = 0;            // gradient mapping evaluations spent
};

// Bisection ran out of budget; best_s is the most balanced point seen.
struct line_search_error : no_convergence_error {
  line_search_error(const std::string& what, double s, double res)
      : no_convergence_error(what), best_s(s), residual(res) {}
  double best_s;
  double residual;
};

// Finds z on the segment [x, y] with G(z)'(y - z) >= -slack and
// G(z)'(x - z) >= -slack, where slack = tol * L * ||y - x||^2.  Returns y
// when hbar(1) <= 0 and x when hbar(0) >= 0; otherwise bisects from s = 0
// on the first sign bracket, capped at 200 halvings.
z_search_result find_z(const problem& p, const dvec& x, const dvec& y, double tol = 1e-8);

}  // namespace compass
