#pragma once

#include "compass/problem_io.hpp"
#include "compass/trace.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace compass {

// x* and F* for a quadratic problem with no extra term, a ball, or an
// l1 term, computed by direct methods independent of the iterative
// solvers.  ok is false (with a reason) for unsupported combinations.
struct reference_solution {
  dvec xstar;
  double Fstar = 0.0;
  bool ok = false;
  std::string why;
};

reference_solution reference_optimum(const problem& p);

// Algorithms the harness can drive.  Compatibility is checked before a
// run: strong variants need alpha > 0, the convex ones need a convex
// smooth part, trs-lanczos needs quadratic + ball, the reference
// frameworks need a quadratic with a supported extra term.
const std::vector<std::string>& algorithm_names();
bool algorithm_compatible(const problem& p, const std::string& algo, std::string* why);

struct run_options {
  std::string algo;
  int max_iters = 500;
  double tol = 1e-8;     // gd-strong stops at xi2 <= tol^2, the others at |G| <= tol L
  bool timing = false;   // fill wall_time_ns (off by default so traces rerun bytewise)
  bool reference = true; // compute x* when possible, for potential and bound columns
};

struct run_result {
  std::vector<trace_record> trace;
  bool converged = false;
  int iterations = 0;
  double final_F = 0.0;
  double final_Gnorm = 0.0;
};

// Runs from x0 = 0 and assembles one trace row per iteration (plus the
// starting row where the algorithm has one).
run_result run_algorithm(const problem& p, const run_options& opt);

// Machine verification: every inequality the analysis guarantees for an
// algorithm is evaluated on an actual run at pinned tolerances.
struct check_result {
  std::string name;
  std::string anchor;  // the inequality being enforced, in plain text
  std::uint64_t seed = 0;
  bool passed = false;
  double worst_violation = 0.0;  // max of lhs - rhs - slack; positive means failed
};

// Accumulates lhs <= rhs + slack comparisons for one check.  Feeding no
// comparison leaves the check vacuously passing with violation 0.
class ineq_check {
 public:
  void require(double lhs, double rhs, double slack);
  check_result finish(const std::string& name, const std::string& anchor,
                      std::uint64_t seed) const;

 private:
  bool fed_ = false;
  double worst_ = 0.0;
};

struct check_info {
  std::string name;
  std::string anchor;
  std::string algo;
};

// Documented registry; a report never contains a check absent from it.
const std::vector<check_info>& check_registry();

std::vector<check_result> run_checks(const problem& p, const std::string& algo,
                                     int max_iters, double tol, std::uint64_t seed_label);

struct verification_report {
  std::string algorithm;
  std::vector<check_result> checks;  // sorted by (name, seed)
  bool all_passed() const;
};

// With seeds, sibling instances are drawn from the problem's generator
// block and verified in parallel (worker count capped by
// COMPASS_THREADS); without seeds the given instance alone is checked.
verification_report verify_algorithm(const loaded_problem& lp, const std::string& algo,
                                     const std::vector<std::uint64_t>& seeds,
                                     int max_iters, double tol);

nlohmann::json report_to_json(const verification_report& rep);

}  // namespace compass
