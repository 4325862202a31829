#pragma once

#include "compass/core.hpp"

namespace compass::kernels {

// Worker count for the parallel kernels.  COMPASS_THREADS caps it; the
// value is read once and clamped to [1, omp_get_max_threads()].
int thread_count();

// Rows below this size are not worth forking for.
inline constexpr Eigen::Index parallel_cutoff = 192;

// y = A x for symmetric A.  Entry i is the dot product of column i with
// x, accumulated left to right, in both variants.  The parallel variant
// only splits the rows across threads, so it is bit-identical to the
// serial one at any thread count.
void symv_serial(const dmat& A, const dvec& x, dvec& y);
void symv(const dmat& A, const dvec& x, dvec& y);

// y_i = d_i x_i
void diag_mv_serial(const dvec& d, const dvec& x, dvec& y);
void diag_mv(const dvec& d, const dvec& x, dvec& y);

// z_i = sign(x_i) max(|x_i| - w, 0)
void soft_threshold_serial(const dvec& x, double w, dvec& z);
void soft_threshold(const dvec& x, double w, dvec& z);

// z_i = min(max(x_i, lo_i), hi_i)
void clamp_serial(const dvec& x, const dvec& lo, const dvec& hi, dvec& z);
void clamp(const dvec& x, const dvec& lo, const dvec& hi, dvec& z);

}  // namespace compass::kernels
