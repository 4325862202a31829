#include "compass/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace compass {

namespace {

// Squared radii come out of subtractions that can go slightly negative
// at the boundary of validity.  Within -1e-12 * scale they are clipped
// to zero; anything more negative is a real violation.
double clip_radius_sq(double v, double scale) {
  if (v >= 0.0) return v;
  if (v >= -1e-12 * scale) return 0.0;
  throw precondition_error("squared radius is negative beyond rounding");
}

void check_pair(const dvec& z, const dvec& y) {
  if (z.size() != y.size()) throw precondition_error("centers differ in size");
  ensure_finite(z, "z");
  ensure_finite(y, "y");
}

}  // namespace

ball enclose_with_lambda(const dvec& z, double rho_sq, const dvec& y, double sigma_sq,
                         double delta_sq, double lambda) {
  check_pair(z, y);
  if (rho_sq < 0.0 || sigma_sq < 0.0 || delta_sq < 0.0)
    throw precondition_error("squared radii must be nonnegative");
  if (!(lambda >= 0.0 && lambda <= 1.0))
    throw precondition_error("lambda must lie in [0, 1]");
  double gap_sq = (z - y).squaredNorm();
  double scale = std::max({rho_sq, sigma_sq, delta_sq, 1.0});
  if (delta_sq > gap_sq + 1e-12 * scale)
    throw precondition_error("delta must not exceed the center distance");

  ball out;
  out.center = (1.0 - lambda) * z + lambda * y;
  out.radius_sq = clip_radius_sq(
      (1.0 - lambda) * rho_sq + lambda * sigma_sq - lambda * (1.0 - lambda) * delta_sq,
      scale);
  return out;
}

ball enclose_optimal(const dvec& z, double rho_sq, const dvec& y, double sigma_sq,
                     double delta_sq) {
  check_pair(z, y);
  if (rho_sq < 0.0 || sigma_sq < 0.0 || delta_sq < 0.0)
    throw precondition_error("squared radii must be nonnegative");
  double scale = std::max({rho_sq, sigma_sq, delta_sq, 1.0});
  double delta = std::sqrt(delta_sq);
  if (std::sqrt(rho_sq) + std::sqrt(sigma_sq) < delta - 1e-12 * std::sqrt(scale))
    throw precondition_error("balls do not overlap");
  if (std::abs(rho_sq - sigma_sq) > delta_sq * (1.0 + 1e-12))
    throw precondition_error("optimal weight falls outside [0, 1]");
  if (delta_sq <= 0.0)
    throw precondition_error("coincident centers admit no combination weight");

  double lambda = std::clamp((delta_sq + rho_sq - sigma_sq) / (2.0 * delta_sq), 0.0, 1.0);
  double diff = rho_sq - sigma_sq;
  ball out;
  out.center = (1.0 - lambda) * z + lambda * y;
  out.radius_sq = clip_radius_sq(
      0.5 * rho_sq + 0.5 * sigma_sq - 0.25 * delta_sq - diff * diff / (4.0 * delta_sq),
      scale);
  return out;
}

ball gd_combine(const dvec& z, const dvec& y, double r1_sq, double r2_sq, double eps,
                double C) {
  check_pair(z, y);
  if (!(eps >= 0.0 && eps <= 1.0)) throw precondition_error("eps must lie in [0, 1]");
  if (!(r2_sq > 0.0)) throw precondition_error("r2_sq must be positive");
  double scale = std::max({std::abs(r1_sq), r2_sq, std::abs(C), 1.0});
  double rad_y_sq = clip_radius_sq(r1_sq - eps * r2_sq - C, scale);
  double rad_z_sq = clip_radius_sq((1.0 - eps) * r2_sq - C, scale);
  double gap = (y - z).norm();
  if (gap < std::sqrt(r2_sq) * (1.0 - 1e-12))
    throw precondition_error("centers are closer than sqrt(r2_sq)");
  if (gap > std::sqrt(rad_y_sq) + std::sqrt(rad_z_sq) + 1e-12 * std::sqrt(scale))
    throw precondition_error("balls do not overlap");

  ball out;
  if (r1_sq <= 2.0 * r2_sq) {
    double lambda = (2.0 * r2_sq - r1_sq) / (2.0 * r2_sq);
    out.center = (1.0 - lambda) * z + lambda * y;
    out.radius_sq =
        clip_radius_sq(r1_sq - eps * r2_sq - r1_sq * r1_sq / (4.0 * r2_sq) - C, scale);
  } else {
    out.center = z;
    out.radius_sq = rad_z_sq;
  }

  // The whole point of the combination: the result fits inside the
  // contracted ball of squared radius (1 - sqrt(eps)) r1_sq - C.
  double target = (1.0 - std::sqrt(eps)) * r1_sq - C;
  if (out.radius_sq > target + 1e-10 * scale)
    throw std::logic_error("combined ball exceeds its certified radius");
  return out;
}

}  // namespace compass
