#pragma once

#include "compass/core.hpp"

namespace compass {

// A ball stored with its squared radius, since every identity here is
// algebraic in the squares.
struct ball {
  dvec center;
  double radius_sq = 0.0;
};

// Ball through the convex combination of two centers that contains the
// intersection of B(z, sqrt(rho_sq)) and B(y, sqrt(sigma_sq)), valid for
// any lambda in [0, 1] whenever delta_sq <= ||z - y||^2:
//   center = (1 - lambda) z + lambda y
//   radius_sq = (1 - lambda) rho_sq + lambda sigma_sq - lambda (1 - lambda) delta_sq
ball enclose_with_lambda(const dvec& z, double rho_sq, const dvec& y, double sigma_sq,
                         double delta_sq, double lambda);

// The lambda minimizing the radius above, requiring the balls to overlap
// (rho + sigma >= delta) and neither to contain the other's center gap
// (|rho_sq - sigma_sq| <= delta_sq).  Violations throw precondition_error
// so callers can fall back to a fixed weight.
ball enclose_optimal(const dvec& z, double rho_sq, const dvec& y, double sigma_sq,
                     double delta_sq);

// Specialization used by the strongly convex solver: encloses
//   B(y, sqrt(r1_sq - eps r2_sq - C)) ∩ B(z, sqrt((1 - eps) r2_sq - C))
// under the preconditions ||y - z|| >= sqrt(r2_sq) and
// ||y - z|| <= sqrt(r1_sq - eps r2_sq - C) + sqrt((1 - eps) r2_sq - C).
// Picks the combination center when r1_sq <= 2 r2_sq and z otherwise, and
// certifies radius_sq <= (1 - sqrt(eps)) r1_sq - C before returning.
ball gd_combine(const dvec& z, const dvec& y, double r1_sq, double r2_sq, double eps,
                double C);

}  // namespace compass
