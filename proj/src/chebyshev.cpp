#include "compass/chebyshev.hpp"

#include <cmath>

namespace compass {

namespace {

void check_interval(const spectral_bound_data& s, const char* who) {
  if (!(s.lam_max + s.mu > 0.0))
    throw precondition_error(std::string(who) + ": needs lam_max + mu > 0");
}

double shifted_top(const spectral_bound_data& s) { return s.lam_max + s.mu; }
double shifted_bottom(const spectral_bound_data& s) { return s.lam_min + s.mu; }

}  // namespace

double chebyshev_T(int k, double z) {
  if (k < 0) throw precondition_error("chebyshev_T: negative degree");
  if (k == 0) return 1.0;
  if (std::abs(z) <= 1.0) return std::cos(k * std::acos(z));

  double prev = 1.0, cur = z;
  for (int j = 1; j < k; ++j) {
    double next = 2.0 * z * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

double chebyshev_peak_left(int k, double z) {
  double t = chebyshev_T(k, z);
  return k % 2 == 0 ? 1.0 + t : 1.0 - t;
}

double chebyshev_zero_left(int k, double z) {
  double t = chebyshev_T(k, z);
  return k % 2 == 0 ? 1.0 - t : 1.0 + t;
}

double residual_poly_interval(int k, double t, const spectral_bound_data& s) {
  return interval_poly_coefficient(k, s) *
         chebyshev_peak_left(k, (2.0 * t - (s.lam_min + s.lam_max + 2.0 * s.mu)) /
                                    (s.lam_max - s.lam_min));
}

double interval_poly_coefficient(int k, const spectral_bound_data& s) {
  check_interval(s, "interval_poly_coefficient");
  if (!(shifted_bottom(s) > 0.0))
    throw precondition_error("interval_poly_coefficient: needs lam_min + mu > 0");
  if (!(s.lam_max > s.lam_min))
    throw precondition_error("interval_poly_coefficient: degenerate interval");

  double z0 = -(s.lam_min + s.lam_max + 2.0 * s.mu) / (s.lam_max - s.lam_min);
  double denom = chebyshev_peak_left(k, z0);
  if (std::isinf(denom)) return 0.0;  // huge k, the polynomial is tiny there
  return 1.0 / denom;
}

double interval_coefficient_bound(int k, const spectral_bound_data& s) {
  double zeta = std::sqrt(shifted_top(s) / shifted_bottom(s));
  return 2.0 * std::pow((zeta - 1.0) / (zeta + 1.0), k);
}

double residual_poly_origin(int k, double t, const spectral_bound_data& s) {
  check_interval(s, "residual_poly_origin");
  const double top = shifted_top(s);
  const double kk = static_cast<double>(k + 1) * (k + 1);

  // Near the origin the numerator vanishes along with t; switch to the
  // quadratic Taylor development of the numerator about z = -1, whose
  // curvature there is -(k+1)^2 ((k+1)^2 - 1) / 3.
  if (std::abs(t) < 1e-8 * top) return 1.0 - (kk - 1.0) * t / (3.0 * top);
  return top * chebyshev_zero_left(k + 1, 2.0 * t / top - 1.0) / (2.0 * kk * t);
}

double linear_rate_bound(int k, const spectral_bound_data& s, double f0_gap) {
  if (!(s.mu > 0.0)) throw precondition_error("linear_rate_bound: needs mu > 0");
  return 6.0 * interval_poly_coefficient(k, s) * f0_gap;
}

double sublinear_rate_bound(int k, const spectral_bound_data& s, double delta) {
  check_interval(s, "sublinear_rate_bound");
  double kk = static_cast<double>(k + 1) * (k + 1);
  return 3.0 * shifted_top(s) * delta * delta / (2.0 * kk);
}

comparator_decomposition residual_comparator(const dvec& lam, const dvec& b,
                                             const spectral_bound_data& s, int k,
                                             bool origin_family) {
  ensure_size(b, lam.size(), "b");
  comparator_decomposition out;
  out.y.resize(lam.size());

  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    double ti = lam(i) + s.mu;
    if (!(ti > 0.0))
      throw precondition_error("residual_comparator: shifted eigenvalue not positive");
    double q = origin_family ? residual_poly_origin(k, ti, s)
                             : residual_poly_interval(k, ti, s);
    // y_i = -(q(t_i) - 1)/t_i * b_i, the feasible point whose residual
    // polynomial is q.
    out.y(i) = -(q - 1.0) / ti * b(i);
    double w = b(i) * b(i) / (ti * ti);
    out.t1 += 0.5 * q * q * w * ti;
    out.t2 += 0.5 * s.mu * w * q * (2.0 - q);
  }
  out.total = out.t1 + out.t2;
  return out;
}

}  // namespace compass
