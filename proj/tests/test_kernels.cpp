#include <doctest.h>

#include "compass/core.hpp"
#include "compass/kernels.hpp"

#include <cmath>

using namespace compass;

namespace {

dmat random_symmetric(Eigen::Index n, rng& r) {
  dmat A(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i <= j; ++i) {
      double v = r.normal();
      A(i, j) = v;
      A(j, i) = v;
    }
  return A;
}

}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("symv matches the dense product") {
  rng r(11);
  for (Eigen::Index n : {1, 7, 64}) {
    dmat A = random_symmetric(n, r);
    dvec x = r.normal_vector(n);
    dvec y;
    kernels::symv(A, x, y);
    dvec want = A.selfadjointView<Eigen::Lower>() * x;
    double scale = want.norm() + 1.0;
    CHECK((y - want).norm() <= 1e-12 * scale);
  }
}

TEST_CASE("parallel symv is bit-identical to serial") {
  rng r(12);
  const Eigen::Index n = kernels::parallel_cutoff + 65;
  dmat A = random_symmetric(n, r);
  dvec x = r.normal_vector(n);
  dvec ys, yp;
  kernels::symv_serial(A, x, ys);
  kernels::symv(A, x, yp);
  REQUIRE(ys.size() == yp.size());
  for (Eigen::Index i = 0; i < n; ++i) CHECK(ys[i] == yp[i]);
}

TEST_CASE("diag_mv multiplies elementwise") {
  rng r(13);
  dvec d = r.normal_vector(9);
  dvec x = r.normal_vector(9);
  dvec y;
  kernels::diag_mv(d, x, y);
  for (Eigen::Index i = 0; i < 9; ++i) CHECK(y[i] == d[i] * x[i]);
}

TEST_CASE("soft threshold agrees with the scalar formula") {
  rng r(14);
  const double w = 0.35;
  dvec x = r.normal_vector(200);
  x[0] = w;       // exactly at the kink
  x[1] = -w;
  x[2] = 0.0;
  dvec z, zs;
  kernels::soft_threshold(x, w, z);
  kernels::soft_threshold_serial(x, w, zs);
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    double want = x[i] > w ? x[i] - w : (x[i] < -w ? x[i] + w : 0.0);
    CHECK(z[i] == want);
    CHECK(zs[i] == want);
  }
}

TEST_CASE("clamp projects onto the box") {
  rng r(15);
  const Eigen::Index n = 50;
  dvec x = r.normal_vector(n);
  dvec lo = dvec::Constant(n, -0.5);
  dvec hi = dvec::Constant(n, 0.25);
  dvec z;
  kernels::clamp(x, lo, hi, z);
  for (Eigen::Index i = 0; i < n; ++i) {
    CHECK(z[i] == std::min(std::max(x[i], lo[i]), hi[i]));
    CHECK(z[i] >= lo[i]);
    CHECK(z[i] <= hi[i]);
  }
}

TEST_CASE("thread count is a sane worker number") {
  int t = kernels::thread_count();
  CHECK(t >= 1);
  CHECK(t == kernels::thread_count());  // stable across calls
}

}  // TEST_SUITE
