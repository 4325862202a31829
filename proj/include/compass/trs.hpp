#pragma once

#include "compass/problem.hpp"

#include <vector>

namespace compass {

// min x'Ax/2 - b'x subject to ||x|| <= delta, solved by conjugate
// gradients from x0 = 0.  The residuals double as Lanczos vectors, so
// once an iterate leaves the ball the ball-constrained subproblem is
// solved in the tridiagonal coordinates and mapped back; from then on
// every iterate comes from that subproblem while the recurrences keep
// extending the basis.

struct trs_options {
  double tol = 1e-10;   // residual / stationarity target, relative to ||b||
  int max_iters = 0;    // 0 picks dim + 5
  int reorth = -1;      // -1 auto (on when dim <= 500), 0 off, 1 on
  bool record = false;  // keep per-iteration data for diagnostics
};

struct trs_iterate {
  dvec x;
  double f = 0.0;     // quadratic value at x
  double mu = 0.0;    // multiplier when the iterate came from the subproblem
  bool boundary = false;
};

struct trs_result {
  dvec x;
  double mu = 0.0;
  double f = 0.0;
  bool boundary = false;
  bool converged = false;
  int iterations = 0;
  std::vector<trs_iterate> history;      // filled when options.record
  std::vector<dvec> search_directions;   // p_k, same condition
};

// CG coefficients broke down before the subproblem could certify the
// solution (indefinite or semidefinite input off the supported path).
struct breakdown_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

trs_result trs_solve(const quadratic_data& qd, double delta, trs_options opt = {});
trs_result trs_solve(const problem& p, trs_options opt = {});  // needs quad + ball

// Ball-constrained minimization of h'Th/2 - r0_norm e1'h for symmetric
// tridiagonal T, via a safeguarded Newton iteration on the secular
// equation 1/||h(mu)|| = 1/delta.
struct tridiag_trs_result {
  dvec h;
  double mu = 0.0;
  double h_norm = 0.0;
  int iterations = 0;
  bool boundary = false;
};

tridiag_trs_result solve_tridiagonal_trs(const std::vector<double>& diag,
                                         const std::vector<double>& off, double r0_norm,
                                         double delta, double rel_tol = 1e-10);

// First-order certificate for a candidate (x, mu).
struct kkt_report {
  double stationarity = 0.0;    // ||(A + mu I) x - b||
  double complementarity = 0.0; // |mu (||x|| - delta)|
  double feasibility = 0.0;     // max(0, ||x|| - delta)
  double curvature_margin = 0.0; // smallest eigenvalue of A + mu I
};

kkt_report kkt_certify(const quadratic_data& qd, const dvec& x, double mu, double delta);

// Reference solution through an explicit eigendecomposition plus a
// one-dimensional rootfind on the multiplier.  Exact up to rounding for
// any symmetric A outside the degenerate case where b has no weight on
// the bottom eigenspace and the limit solution is interior; that case is
// rejected.  Intended for moderate sizes (say n <= 2000).
struct dense_trs_result {
  dvec x;
  double mu = 0.0;
  double f = 0.0;
  kkt_report kkt;
};

dense_trs_result dense_trs_oracle(const quadratic_data& qd, double delta);

// Same rootfind on an explicit small matrix: min u'Bu/2 - g'u, ||u|| <= delta.
dense_trs_result dense_trs_small(const dmat& B, const dvec& g, double delta);

}  // namespace compass
