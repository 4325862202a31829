#include <doctest.h>

#include "compass/chebyshev.hpp"

#include <cmath>

using namespace compass;

namespace {

long double cheb_recurrence(int k, long double z) {
  if (k == 0) return 1.0L;
  long double prev = 1.0L, cur = z;
  for (int j = 1; j < k; ++j) {
    long double next = 2.0L * z * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

spectral_bound_data make_bound(double lam_min, double lam_max, double mu) {
  spectral_bound_data s;
  s.lam_min = lam_min;
  s.lam_max = lam_max;
  s.mu = mu;
  return s;
}

}  // namespace

TEST_SUITE("chebyshev") {

TEST_CASE("the evaluator matches the extended-precision recurrence") {
  for (int k : {0, 1, 2, 5, 11, 20, 30}) {
    for (int j = 0; j <= 120; ++j) {
      double z = -3.0 + 6.0 * j / 120.0;
      double want = static_cast<double>(cheb_recurrence(k, z));
      double got = chebyshev_T(k, z);
      CHECK(std::abs(got - want) <= 1e-10 * std::max(1.0, std::abs(want)));
    }
  }
}

TEST_CASE("the parity-adjusted values are pinned at the left endpoint") {
  for (int k : {1, 2, 3, 8, 15, 24}) {
    CHECK(chebyshev_peak_left(k, -1.0) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(std::abs(chebyshev_zero_left(k, -1.0)) <= 1e-14);

    // the zero family leaves the endpoint with slope k^2
    const double h = 1e-7;
    double slope = chebyshev_zero_left(k, -1.0 + h) / h;
    CHECK(slope == doctest::Approx(static_cast<double>(k) * k).epsilon(1e-2));
  }
}

TEST_CASE("both parity families stay in their band") {
  for (int k : {1, 3, 6, 13, 27}) {
    for (int j = 0; j <= 400; ++j) {
      double z = -1.0 + 2.0 * j / 400.0;
      double pk = chebyshev_peak_left(k, z);
      double zr = chebyshev_zero_left(k, z);
      CHECK(pk >= -1e-12);
      CHECK(pk <= 2.0 + 1e-12);
      CHECK(zr >= -1e-12);
      CHECK(zr <= 2.0 + 1e-12);
    }
    for (int j = 1; j <= 50; ++j) {
      double z = -1.0 - 2.0 * j / 50.0;
      CHECK(chebyshev_peak_left(k, z) >= 2.0 - 1e-12);
    }
  }
}

TEST_CASE("both residual families are normalized at the origin") {
  rng r(91);
  for (int rep = 0; rep < 10; ++rep) {
    double lo = r.uniform(0.1, 2.0);
    double hi = lo + r.uniform(0.5, 20.0);
    double mu = r.uniform(0.0, 3.0);
    spectral_bound_data s = make_bound(lo, hi, mu);
    for (int k = 1; k <= 40; k += 7) {
      CHECK(std::abs(residual_poly_interval(k, 0.0, s) - 1.0) <= 1e-12);
      CHECK(std::abs(residual_poly_origin(k, 0.0, s) - 1.0) <= 1e-12);
    }
  }
}

TEST_CASE("the residual polynomials stay small on their intervals") {
  // one definite and one shifted indefinite spectrum
  for (spectral_bound_data s : {make_bound(0.5, 12.0, 0.9), make_bound(-1.0, 8.0, 1.8)}) {
    const double bottom = s.lam_min + s.mu;
    const double top = s.lam_max + s.mu;
    REQUIRE(bottom > 0.0);
    for (int k : {1, 4, 9, 17}) {
      for (int j = 0; j <= 1000; ++j) {
        double t = bottom + (top - bottom) * j / 1000.0;
        double q = residual_poly_interval(k, t, s);
        CHECK(q >= -1e-10);
        CHECK(q <= 1.0 + 1e-10);
      }
      for (int j = 0; j <= 1000; ++j) {
        double t = top * j / 1000.0;
        double q = residual_poly_origin(k, t, s);
        CHECK(q >= -1e-10);
        CHECK(q <= 1.0 + 1e-10);
      }
    }
  }
}

TEST_CASE("the normalization constant obeys its closed bound") {
  rng r(92);
  for (int rep = 0; rep < 8; ++rep) {
    double lo = r.uniform(0.2, 1.5);
    double hi = lo + r.uniform(1.0, 30.0);
    double mu = r.uniform(0.0, 2.0);
    spectral_bound_data s = make_bound(lo, hi, mu);
    for (int k = 1; k <= 25; k += 4) {
      double c = interval_poly_coefficient(k, s);
      CHECK(c > 0.0);
      CHECK(c < 0.5);
      CHECK(c <= interval_coefficient_bound(k, s) * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("the series branch meets the direct quotient at the crossover") {
  spectral_bound_data s = make_bound(0.3, 9.0, 0.5);
  const double top = s.lam_max + s.mu;
  for (int k : {1, 3, 8, 16}) {
    double kk = static_cast<double>(k + 1) * (k + 1);
    double t_above = 2e-8 * top;
    double series = 1.0 - (kk - 1.0) * t_above / (3.0 * top);
    CHECK(std::abs(residual_poly_origin(k, t_above, s) - series) <= 1e-6);
  }
}

TEST_CASE("the comparator point splits the value gap exactly") {
  rng r(93);
  const Eigen::Index n = 15;
  dvec lam(n), b(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    lam[i] = r.uniform(0.5, 5.0);
    b[i] = r.normal();
  }
  spectral_bound_data s = make_bound(lam.minCoeff(), lam.maxCoeff(), 0.7);

  dvec xstar(n);
  for (Eigen::Index i = 0; i < n; ++i) xstar[i] = b[i] / (lam[i] + s.mu);
  auto f = [&](const dvec& v) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
      acc += 0.5 * lam[i] * v[i] * v[i] - b[i] * v[i];
    return acc;
  };
  const double fstar = f(xstar);

  for (int k : {1, 2, 5, 9, 14}) {
    for (bool origin : {false, true}) {
      comparator_decomposition dec = residual_comparator(lam, b, s, k, origin);
      CHECK(dec.y.norm() <= xstar.norm() * (1.0 + 1e-12));
      // the split reproduces the directly evaluated gap up to the
      // cancellation noise of the subtraction on the right
      CHECK(std::abs(dec.total - (f(dec.y) - fstar)) <=
            1e-12 * (1.0 + std::abs(fstar)));
      CHECK(dec.t1 >= 0.0);
      CHECK(dec.t2 >= 0.0);

      double bound = origin ? sublinear_rate_bound(k, s, xstar.norm())
                            : linear_rate_bound(k, s, -fstar);
      CHECK(dec.total <= bound * (1.0 + 1e-10));
    }
  }
}

TEST_CASE("degenerate spectra are rejected") {
  CHECK_THROWS_AS(interval_poly_coefficient(3, make_bound(1.0, 1.0, 0.0)),
                  precondition_error);
  CHECK_THROWS_AS(interval_poly_coefficient(3, make_bound(-2.0, 5.0, 1.0)),
                  precondition_error);
  CHECK_THROWS_AS(linear_rate_bound(3, make_bound(1.0, 5.0, 0.0), 1.0),
                  precondition_error);
  CHECK_THROWS_AS(chebyshev_T(-1, 0.5), precondition_error);
}

}  // TEST_SUITE
