#include "compass/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <cstdlib>

namespace compass::kernels {

int thread_count() {
  static const int n = [] {
    int hw = omp_get_max_threads();
    int want = hw;
    if (const char* env = std::getenv("COMPASS_THREADS")) {
      char* end = nullptr;
      long v = std::strtol(env, &end, 10);
      if (end != env && v >= 1) want = static_cast<int>(v);
    }
    return std::clamp(want, 1, hw);
  }();
  return n;
}

namespace {

inline double col_dot(const dmat& A, const dvec& x, Eigen::Index i) {
  const double* a = A.data() + i * A.rows();
  const double* xp = x.data();
  double s = 0.0;
  for (Eigen::Index j = 0; j < A.rows(); ++j) s += a[j] * xp[j];
  return s;
}

}  // namespace

void symv_serial(const dmat& A, const dvec& x, dvec& y) {
  const Eigen::Index n = A.rows();
  y.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) y[i] = col_dot(A, x, i);
}

void symv(const dmat& A, const dvec& x, dvec& y) {
  const Eigen::Index n = A.rows();
  const int t = thread_count();
  if (n < parallel_cutoff || t == 1) {
    symv_serial(A, x, y);
    return;
  }
  y.resize(n);
#pragma omp parallel for num_threads(t) schedule(static)
  for (Eigen::Index i = 0; i < n; ++i) y[i] = col_dot(A, x, i);
}

void diag_mv_serial(const dvec& d, const dvec& x, dvec& y) {
  const Eigen::Index n = d.size();
  y.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) y[i] = d[i] * x[i];
}

void diag_mv(const dvec& d, const dvec& x, dvec& y) {
  const Eigen::Index n = d.size();
  const int t = thread_count();
  if (n < 1 << 15 || t == 1) {
    diag_mv_serial(d, x, y);
    return;
  }
  y.resize(n);
#pragma omp parallel for num_threads(t) schedule(static)
  for (Eigen::Index i = 0; i < n; ++i) y[i] = d[i] * x[i];
}

namespace {

inline double soft1(double v, double w) {
  if (v > w) return v - w;
  if (v < -w) return v + w;
  return 0.0;
}

}  // namespace

void soft_threshold_serial(const dvec& x, double w, dvec& z) {
  const Eigen::Index n = x.size();
  z.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) z[i] = soft1(x[i], w);
}

void soft_threshold(const dvec& x, double w, dvec& z) {
  const Eigen::Index n = x.size();
  const int t = thread_count();
  if (n < 1 << 15 || t == 1) {
    soft_threshold_serial(x, w, z);
    return;
  }
  z.resize(n);
#pragma omp parallel for num_threads(t) schedule(static)
  for (Eigen::Index i = 0; i < n; ++i) z[i] = soft1(x[i], w);
}

void clamp_serial(const dvec& x, const dvec& lo, const dvec& hi, dvec& z) {
  const Eigen::Index n = x.size();
  z.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) z[i] = std::min(std::max(x[i], lo[i]), hi[i]);
}

void clamp(const dvec& x, const dvec& lo, const dvec& hi, dvec& z) {
  const Eigen::Index n = x.size();
  const int t = thread_count();
  if (n < 1 << 15 || t == 1) {
    clamp_serial(x, lo, hi, z);
    return;
  }
  z.resize(n);
#pragma omp parallel for num_threads(t) schedule(static)
  for (Eigen::Index i = 0; i < n; ++i) z[i] = std::min(std::max(x[i], lo[i]), hi[i]);
}

}  // namespace compass::kernels
