#pragma once

#include "compass/core.hpp"

namespace compass {

// A priori convergence rates for the ball-constrained Krylov solver,
// built from two families of shifted Chebyshev polynomials.  Everything
// here is expressed through the extreme eigenvalues of the matrix and
// the multiplier of the ball constraint at the solution.

struct spectral_bound_data {
  double lam_min = 0.0;
  double lam_max = 0.0;
  double mu = 0.0;  // multiplier at the constrained optimum
};

// First-kind Chebyshev polynomial, evaluated by cos(k acos z) inside
// [-1, 1] and by the three-term recurrence outside, where the magnitude
// grows and the recurrence is stable.
double chebyshev_T(int k, double z);

// 1 + T_k or 1 - T_k with the sign chosen by parity so the value at
// z = -1 is exactly 2; stays within [0, 2] on [-1, 1] and exceeds 2 to
// the left of -1.
double chebyshev_peak_left(int k, double z);

// The complementary parity choice: value 0 at z = -1 with slope k^2,
// again within [0, 2] on [-1, 1].
double chebyshev_zero_left(int k, double z);

// Degree-k polynomial with value 1 at t = 0 that is uniformly small on
// the shifted spectrum [lam_min + mu, lam_max + mu].  Needs
// lam_min + mu > 0 and a nondegenerate interval.
double residual_poly_interval(int k, double t, const spectral_bound_data& s);

// Its normalization constant; always below 1/2, and at most
// 2 ((zeta-1)/(zeta+1))^k with zeta = sqrt((lam_max+mu)/(lam_min+mu)).
double interval_poly_coefficient(int k, const spectral_bound_data& s);
double interval_coefficient_bound(int k, const spectral_bound_data& s);

// Degree-k polynomial with value 1 at t = 0 that stays within [0, 1] on
// all of [0, lam_max + mu]; decays only quadratically in k but does not
// involve lam_min at all.  A series branch covers |t| near 0 where the
// direct quotient cancels.
double residual_poly_origin(int k, double t, const spectral_bound_data& s);

// Value gap of the Krylov iterate x_k against the constrained optimum:
//   f(x_k) - f* <= 6 c_k (f(0) - f*)          [needs mu > 0]
//   f(x_k) - f* <= 3 (lam_max + mu) delta^2 / (2 (k+1)^2)
double linear_rate_bound(int k, const spectral_bound_data& s, double f0_gap);
double sublinear_rate_bound(int k, const spectral_bound_data& s, double delta);

// Feasible comparison point y with f(x_k) <= f(y) built from either
// family, together with the exact split of f(y) - f* into the smooth
// part t1 and the multiplier part t2.  lam holds the eigenvalues and b
// the linear term in the eigenbasis.
struct comparator_decomposition {
  dvec y;
  double t1 = 0.0;
  double t2 = 0.0;
  double total = 0.0;  // t1 + t2
};

comparator_decomposition residual_comparator(const dvec& lam, const dvec& b,
                                             const spectral_bound_data& s, int k,
                                             bool origin_family);

}  // namespace compass
