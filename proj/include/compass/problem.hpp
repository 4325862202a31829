#pragma once

#include "compass/core.hpp"

#include <functional>
#include <memory>

namespace compass {

enum class psi_kind { zero, ball, box, l1 };

// The simple term added to the smooth objective: nothing, an indicator
// of a centered ball or of a box, or a scaled l1 norm.  Indicators
// evaluate to +inf outside their set, with a small feasibility slack so
// projection outputs are never rejected by rounding.
struct simple_term {
  psi_kind kind = psi_kind::zero;
  double delta = 0.0;   // ball radius
  dvec lower, upper;    // box bounds
  double weight = 0.0;  // l1 scale

  double value(const dvec& x) const;
  bool feasible(const dvec& x) const;
};

simple_term zero_term();
simple_term ball_term(double delta);
simple_term box_term(dvec lower, dvec upper);
simple_term l1_term(double weight);

// Data of f(x) = x'Ax/2 - b'x with A symmetric, stored dense or as a
// diagonal.  Eigenvalues (ascending) are computed once at construction;
// they supply the smoothness and strong convexity constants.
struct quadratic_data {
  bool diagonal = false;
  dmat A;
  dvec diag;
  dvec b;
  dvec eigenvalues;

  Eigen::Index dim() const { return b.size(); }
  dvec multiply(const dvec& x) const;
};

// Smooth part with explicit constants.  alpha is the strong convexity
// modulus (0 when merely convex); convex is false when the smallest
// curvature is negative.
struct smooth_oracle {
  std::function<double(const dvec&)> value;
  std::function<dvec(const dvec&)> gradient;
  double L = 0.0;
  double alpha = 0.0;
  bool convex = true;
  Eigen::Index dim = 0;
};

struct problem {
  smooth_oracle f;
  simple_term psi;
  std::shared_ptr<const quadratic_data> quad;  // set for quadratic problems

  Eigen::Index dim() const { return f.dim; }
};

// Rejects non-symmetric input (asymmetry above 1e-12 relative).
problem make_quadratic(dmat A, dvec b, simple_term psi);
problem make_quadratic_diagonal(dvec diag, dvec b, simple_term psi);
// User-supplied smooth part; L and alpha are taken on faith.
problem make_custom(smooth_oracle f, simple_term psi);

// F = f + psi as an extended real.
double eval_F(const problem& p, const dvec& x);
double eval_f(const problem& p, const dvec& x);

}  // namespace compass
