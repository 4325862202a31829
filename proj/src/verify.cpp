#include "compass/verify.hpp"

#include "compass/chebyshev.hpp"
#include "compass/generate.hpp"
#include "compass/idealized.hpp"
#include "compass/kernels.hpp"
#include "compass/prox.hpp"
#include "compass/solvers_convex.hpp"
#include "compass/solvers_strong.hpp"
#include "compass/trs.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <utility>

namespace compass {

namespace {

constexpr double knan = std::numeric_limits<double>::quiet_NaN();

// Balance-point accuracy used by every verification run.  The residual
// of the segment search leaks into the certified inequalities with a
// coefficient we account for below, so it has to sit well under the
// reporting slacks while staying clear of double-precision noise.
constexpr double kls_tol = 1e-13;

long long since_ns(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration_cast<std::chrono::nanoseconds>(
             std::chrono::steady_clock::now() - t0)
      .count();
}

}  // namespace

reference_solution reference_optimum(const problem& p) {
  reference_solution out;
  if (!p.quad) {
    out.why = "only quadratic smooth parts have a direct reference";
    return out;
  }
  try {
    if (p.psi.kind == psi_kind::ball) {
      dense_trs_result r = dense_trs_oracle(*p.quad, p.psi.delta);
      out.xstar = r.x;
    } else if (p.psi.kind == psi_kind::zero || p.psi.kind == psi_kind::l1) {
      if (!p.f.convex) {
        out.why = "an unconstrained nonconvex quadratic has no minimizer";
        return out;
      }
      affine_span whole(dvec::Zero(p.dim()));
      for (Eigen::Index i = 0; i < p.dim(); ++i) {
        dvec e = dvec::Zero(p.dim());
        e(i) = 1.0;
        whole.add(e);
      }
      out.xstar = minimize_over(p, whole, 1e-13);
    } else {
      out.why = "no direct reference for this extra term";
      return out;
    }
  } catch (const std::exception& e) {
    out.why = e.what();
    return out;
  }
  out.Fstar = eval_F(p, out.xstar);
  out.ok = true;
  return out;
}

const std::vector<std::string>& algorithm_names() {
  static const std::vector<std::string> names = {
      "gd-strong", "gd-convex", "gd-nonconvex", "ag",
      "fista",     "trs-lanczos", "ia-strong",  "ia-convex"};
  return names;
}

bool algorithm_compatible(const problem& p, const std::string& algo, std::string* why) {
  auto fail = [&](const char* msg) {
    if (why) *why = msg;
    return false;
  };
  bool known = false;
  for (const std::string& n : algorithm_names()) known = known || n == algo;
  if (!known) return fail("unknown algorithm");

  if (algo == "gd-strong" || algo == "ag" || algo == "ia-strong") {
    if (!(p.f.alpha > 0.0)) return fail("needs a strongly convex smooth part");
  }
  if (algo == "gd-convex" || algo == "fista") {
    if (!p.f.convex) return fail("needs a convex smooth part");
  }
  if (algo == "trs-lanczos") {
    if (!p.quad) return fail("needs an explicit quadratic");
    if (p.psi.kind != psi_kind::ball) return fail("needs a ball term");
  }
  if (algo == "ia-strong" || algo == "ia-convex") {
    if (!p.quad) return fail("the reference framework needs an explicit quadratic");
    if (p.psi.kind == psi_kind::box) return fail("no subspace solver for a box term");
    if (!p.f.convex && p.psi.kind != psi_kind::ball)
      return fail("a nonconvex smooth part needs a ball term to stay bounded");
  }
  return true;
}

// ---------------------------------------------------------------------------
// Drivers.  Each one runs an algorithm from x0 = 0, keeps every state it
// passed through, and notes where it stopped.  Traces and checks both
// read from these records.

namespace {

struct strong_history {
  std::vector<gd_strong_state> states;
  std::vector<long long> t_ns;
  bool converged = false;
};

strong_history drive_gd_strong(const problem& p, int max_iters, double tol, bool timing) {
  strong_history out;
  auto t0 = std::chrono::steady_clock::now();
  gd_strong_state st = gd_strong_init(p, dvec::Zero(p.dim()));
  const double stop = tol * tol;
  out.states.push_back(st);
  if (timing) out.t_ns.push_back(since_ns(t0));
  out.converged = st.xi_sq <= stop;
  for (int k = 1; k <= max_iters && !out.converged; ++k) {
    gd_strong_step(p, st, kls_tol);
    out.states.push_back(st);
    if (timing) out.t_ns.push_back(since_ns(t0));
    out.converged = st.xi_sq <= stop;
  }
  return out;
}

struct ag_history {
  std::vector<ag_state> states;
  std::vector<ag_audit_state> audits;
  std::vector<double> F_vals;
  std::vector<long long> t_ns;
  double G0 = 0.0;
  bool converged = false;
};

ag_history drive_ag(const problem& p, int max_iters, double tol,
                    const reference_solution& ref, bool timing) {
  ag_history out;
  auto t0 = std::chrono::steady_clock::now();
  const dvec x0 = dvec::Zero(p.dim());
  ag_state st = ag_init(p, x0);
  ag_audit_state audit = ref.ok ? ag_audit_init_exact(p, x0, ref.xstar, ref.Fstar)
                                : ag_audit_init(p, x0);
  prox_grad_result pg0 = prox_gradient(p, x0);
  out.G0 = pg0.Gnorm;
  out.states.push_back(st);
  out.audits.push_back(audit);
  out.F_vals.push_back(eval_F(p, x0));
  if (timing) out.t_ns.push_back(since_ns(t0));
  const double stop = tol * p.f.L;
  out.converged = pg0.Gnorm <= stop;
  for (int k = 1; k <= max_iters && !out.converged; ++k) {
    ag_audit_step(p, audit, st.w, st.x);
    ag_step(p, st);
    out.states.push_back(st);
    out.audits.push_back(audit);
    out.F_vals.push_back(eval_F(p, st.x));
    if (timing) out.t_ns.push_back(since_ns(t0));
    out.converged = st.Gw_norm <= stop;
  }
  return out;
}

struct fista_history {
  std::vector<fista_state> states;
  std::vector<double> F_vals;
  std::vector<long long> t_ns;
  double G0 = 0.0;
  bool converged = false;
};

fista_history drive_fista(const problem& p, int max_iters, double tol, bool timing) {
  fista_history out;
  auto t0 = std::chrono::steady_clock::now();
  const dvec x0 = dvec::Zero(p.dim());
  fista_state st = fista_init(p, x0);
  prox_grad_result pg0 = prox_gradient(p, x0);
  out.G0 = pg0.Gnorm;
  out.states.push_back(st);
  out.F_vals.push_back(eval_F(p, x0));
  if (timing) out.t_ns.push_back(since_ns(t0));
  const double stop = tol * p.f.L;
  out.converged = pg0.Gnorm <= stop;
  for (int k = 1; k <= max_iters && !out.converged; ++k) {
    fista_step(p, st);
    out.states.push_back(st);
    out.F_vals.push_back(eval_F(p, st.x));
    if (timing) out.t_ns.push_back(since_ns(t0));
    out.converged = st.Gw_norm <= stop;
  }
  return out;
}

struct convex_history {
  std::vector<gd_convex_state> states;
  std::vector<long long> t_ns;
  bool converged = false;
};

convex_history drive_gd_convex(const problem& p, int max_iters, double tol,
                               bool safeguard, bool timing) {
  convex_history out;
  auto t0 = std::chrono::steady_clock::now();
  gd_convex_state st = gd_convex_init(p, dvec::Zero(p.dim()));
  out.states.push_back(st);
  if (timing) out.t_ns.push_back(since_ns(t0));
  const double stop = tol * p.f.L;
  out.converged = st.Gz_norm <= stop;
  for (int k = 1; k <= max_iters && !out.converged; ++k) {
    gd_convex_step(p, st, safeguard, kls_tol);
    out.states.push_back(st);
    if (timing) out.t_ns.push_back(since_ns(t0));
    out.converged = st.Gz_norm <= stop;
  }
  return out;
}

struct ia_history {
  ia_result res;
  prox_grad_result pg0;
  double F0 = 0.0;
  double F_xbar0 = 0.0;
  bool converged = false;
};

ia_history drive_ia(const problem& p, int max_iters, double tol,
                    const reference_solution& ref, bool strong) {
  ia_history out;
  const dvec x0 = dvec::Zero(p.dim());
  out.pg0 = prox_gradient(p, x0);
  out.F0 = eval_F(p, x0);
  out.F_xbar0 = eval_F(p, out.pg0.xbar);

  ia_options opt;
  opt.iters = max_iters;
  opt.ls_tol = kls_tol;
  opt.g_stop = tol * p.f.L;
  out.res = strong ? ia_strong_run(p, x0, ref.xstar, opt)
                   : ia_convex_run(p, x0, ref.xstar, opt);
  const double stop = tol * p.f.L;
  out.converged = out.pg0.Gnorm <= stop ||
                  (!out.res.steps.empty() && out.res.steps.back().Gx_norm <= stop);
  return out;
}

// Bound curves shared by traces and checks.

double strong_rate(const problem& p) { return 1.0 - std::sqrt(p.f.alpha / p.f.L); }

double ag_rate(const problem& p) { return 1.0 - std::sqrt(p.f.alpha / p.f.L); }

// 2L |x0-x*|^2 + 2 (F(x0)-F*), the numerator of the 1/(k(k+1)) value rate.
double convex_rate_numerator(const problem& p, const dvec& x0, double F0,
                             const reference_solution& ref) {
  return 2.0 * p.f.L * (x0 - ref.xstar).squaredNorm() + 2.0 * (F0 - ref.Fstar);
}

}  // namespace

// ---------------------------------------------------------------------------
// Traces.

run_result run_algorithm(const problem& p, const run_options& opt) {
  std::string why;
  if (!algorithm_compatible(p, opt.algo, &why))
    throw precondition_error(opt.algo + ": " + why);

  reference_solution ref;
  if (opt.reference || opt.algo == "ia-strong" || opt.algo == "ia-convex")
    ref = reference_optimum(p);
  if ((opt.algo == "ia-strong" || opt.algo == "ia-convex") && !ref.ok)
    throw precondition_error(opt.algo + ": no reference optimum: " + ref.why);

  const dvec x0 = dvec::Zero(p.dim());
  const double L = p.f.L;
  run_result out;

  auto stamp = [&](trace_record& tr, const std::vector<long long>& t_ns, std::size_t j) {
    if (opt.timing && j < t_ns.size()) tr.wall_time_ns = t_ns[j];
  };

  if (opt.algo == "gd-strong") {
    strong_history h = drive_gd_strong(p, opt.max_iters, opt.tol, opt.timing);
    const double rate = strong_rate(p);
    const double xi1 = h.states.front().xi_sq;
    double curve = xi1;
    for (std::size_t j = 0; j < h.states.size(); ++j) {
      const gd_strong_state& st = h.states[j];
      trace_record tr;
      tr.k = static_cast<int>(j);
      tr.F = st.F_zbar;
      tr.Gnorm = st.Gz_norm;
      tr.potential = st.xi_sq;
      tr.bound_linear = curve;
      stamp(tr, h.t_ns, j);
      out.trace.push_back(tr);
      curve *= rate;
    }
    out.converged = h.converged;
    out.iterations = static_cast<int>(h.states.size()) - 1;
    out.final_F = h.states.back().F_zbar;
    out.final_Gnorm = h.states.back().Gz_norm;
  } else if (opt.algo == "ag") {
    ag_history h = drive_ag(p, opt.max_iters, opt.tol, ref, opt.timing);
    const double rate = ag_rate(p);
    double curve = h.audits.front().sigma_sq;
    for (std::size_t j = 0; j < h.states.size(); ++j) {
      trace_record tr;
      tr.k = static_cast<int>(j);
      tr.F = h.F_vals[j];
      tr.Gnorm = j == 0 ? h.G0 : h.states[j].Gw_norm;
      tr.potential = h.audits[j].sigma_sq;
      tr.bound_linear = curve;
      stamp(tr, h.t_ns, j);
      out.trace.push_back(tr);
      curve *= rate;
    }
    out.converged = h.converged;
    out.iterations = static_cast<int>(h.states.size()) - 1;
    out.final_F = h.F_vals.back();
    out.final_Gnorm = h.states.size() > 1 ? h.states.back().Gw_norm : h.G0;
  } else if (opt.algo == "fista") {
    fista_history h = drive_fista(p, opt.max_iters, opt.tol, opt.timing);
    const double F0 = h.F_vals.front();
    const double num = ref.ok ? 2.0 * L * (x0 - ref.xstar).squaredNorm() +
                                    4.0 * (F0 - ref.Fstar)
                              : knan;
    for (std::size_t j = 0; j < h.states.size(); ++j) {
      const fista_state& st = h.states[j];
      trace_record tr;
      tr.k = static_cast<int>(j);
      tr.F = h.F_vals[j];
      tr.Gnorm = j == 0 ? h.G0 : st.Gw_norm;
      if (ref.ok) {
        dvec y = fista_audit_y(st);
        tr.potential = (y - ref.xstar).squaredNorm() +
                       2.0 * st.a_prev * st.a_prev * (h.F_vals[j] - ref.Fstar) / L;
        tr.bound_sublinear = ref.Fstar + num / ((j + 1.0) * (j + 1.0));
      }
      stamp(tr, h.t_ns, j);
      out.trace.push_back(tr);
    }
    out.converged = h.converged;
    out.iterations = static_cast<int>(h.states.size()) - 1;
    out.final_F = h.F_vals.back();
    out.final_Gnorm = h.states.size() > 1 ? h.states.back().Gw_norm : h.G0;
  } else if (opt.algo == "gd-convex" || opt.algo == "gd-nonconvex") {
    const bool safeguard = opt.algo == "gd-nonconvex";
    convex_history h = drive_gd_convex(p, opt.max_iters, opt.tol, safeguard, opt.timing);
    const double F0 = eval_F(p, x0);
    const double num = ref.ok ? convex_rate_numerator(p, x0, F0, ref) : knan;
    for (std::size_t j = 0; j < h.states.size(); ++j) {
      const gd_convex_state& st = h.states[j];
      trace_record tr;
      tr.k = static_cast<int>(j);
      tr.F = st.F_zbar;
      tr.Gnorm = st.Gz_norm;
      if (!safeguard && ref.ok) {
        tr.potential = convex_potential(p, st.y, st.F_zbar, st.k + 1, ref.xstar, ref.Fstar);
        if (j >= 1) tr.bound_sublinear = ref.Fstar + num / (j * (j + 1.0));
      }
      if (safeguard && ref.ok) {
        // bounds the running minimum of the Gnorm column
        tr.bound_sublinear = std::sqrt(std::max(2.0 * L * (F0 - ref.Fstar), 0.0) / (j + 1.0));
      }
      stamp(tr, h.t_ns, j);
      out.trace.push_back(tr);
    }
    out.converged = h.converged;
    out.iterations = static_cast<int>(h.states.size()) - 1;
    out.final_F = h.states.back().F_zbar;
    out.final_Gnorm = h.states.back().Gz_norm;
  } else if (opt.algo == "trs-lanczos") {
    trs_options topt;
    topt.tol = opt.tol;
    topt.max_iters = opt.max_iters;
    topt.record = true;
    auto t0 = std::chrono::steady_clock::now();
    trs_result res = trs_solve(p, topt);

    // Polynomial value bounds need the multiplier of the true solution.
    bool have_oracle = false;
    double mu_star = 0.0, f_star = 0.0;
    if (ref.ok) {
      have_oracle = true;
      f_star = 0.5 * ref.xstar.dot(p.quad->multiply(ref.xstar)) - p.quad->b.dot(ref.xstar);
      dense_trs_result oracle = dense_trs_oracle(*p.quad, p.psi.delta);
      mu_star = oracle.mu;
    }
    const dvec& eig = p.quad->eigenvalues;
    spectral_bound_data sb{eig(0), eig(eig.size() - 1), mu_star};
    const bool linear_ok = have_oracle && mu_star > 0.0 && sb.lam_min + sb.mu > 0.0 &&
                           sb.lam_max > sb.lam_min;
    const bool sublinear_ok = have_oracle && sb.lam_max + sb.mu > 0.0;
    const double gap0 = have_oracle ? -f_star : knan;  // f(0) = 0

    prox_grad_result pg0 = prox_gradient(p, x0);
    trace_record first;
    first.k = 0;
    first.F = 0.0;
    first.Gnorm = pg0.Gnorm;
    if (opt.timing) first.wall_time_ns = since_ns(t0);
    out.trace.push_back(first);
    for (std::size_t j = 0; j < res.history.size(); ++j) {
      const int k = static_cast<int>(j) + 1;
      trace_record tr;
      tr.k = k;
      tr.F = res.history[j].f;
      tr.Gnorm = prox_gradient(p, res.history[j].x).Gnorm;
      if (linear_ok)
        tr.bound_linear = f_star + linear_rate_bound(k, sb, gap0);
      if (sublinear_ok)
        tr.bound_sublinear = f_star + sublinear_rate_bound(k, sb, p.psi.delta);
      if (opt.timing) tr.wall_time_ns = since_ns(t0);
      out.trace.push_back(tr);
    }
    out.converged = res.converged;
    out.iterations = res.iterations;
    out.final_F = res.f;
    out.final_Gnorm = prox_gradient(p, res.x).Gnorm;
  } else {  // ia-strong / ia-convex
    const bool strong = opt.algo == "ia-strong";
    ia_history h = drive_ia(p, opt.max_iters, opt.tol, ref, strong);
    const double num = convex_rate_numerator(p, x0, h.F0, ref);
    trace_record first;
    first.k = 0;
    first.F = h.F0;
    first.Gnorm = h.pg0.Gnorm;
    if (strong)
      first.potential = (x0 - ref.xstar).squaredNorm() +
                        2.0 * (h.F0 - ref.Fstar) / p.f.alpha;
    else if (p.f.convex)
      first.potential = (x0 - ref.xstar).squaredNorm();
    out.trace.push_back(first);

    const double rate = strong ? strong_rate(p) : 0.0;
    double curve = knan;
    for (std::size_t j = 0; j < h.res.steps.size(); ++j) {
      const ia_record& rec = h.res.steps[j];
      const int k = static_cast<int>(j) + 1;
      trace_record tr;
      tr.k = k;
      tr.F = rec.F_x;
      tr.Gnorm = rec.Gx_norm;
      if (strong) {
        tr.potential = (rec.y - ref.xstar).squaredNorm() +
                       2.0 * (rec.F_x - ref.Fstar) / p.f.alpha;
        if (j == 0)
          curve = tr.potential;
        else
          curve *= rate;
        tr.bound_linear = curve;
      } else if (p.f.convex) {
        tr.potential = convex_potential(p, rec.y, rec.F_x, k, ref.xstar, ref.Fstar);
        tr.bound_sublinear = ref.Fstar + num / (k * (k + 1.0));
      } else {
        tr.bound_sublinear =
            std::sqrt(std::max(2.0 * L * (h.F0 - ref.Fstar), 0.0) / (k + 1.0));
      }
      out.trace.push_back(tr);
    }
    out.converged = h.converged;
    out.iterations = static_cast<int>(h.res.steps.size());
    out.final_F = h.res.steps.empty() ? h.F0 : h.res.steps.back().F_x;
    out.final_Gnorm = h.res.steps.empty() ? h.pg0.Gnorm : h.res.steps.back().Gx_norm;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Checks.

void ineq_check::require(double lhs, double rhs, double slack) {
  double v = lhs - rhs - slack;
  if (!fed_ || v > worst_) worst_ = v;
  fed_ = true;
}

check_result ineq_check::finish(const std::string& name, const std::string& anchor,
                                std::uint64_t seed) const {
  check_result r;
  r.name = name;
  r.anchor = anchor;
  r.seed = seed;
  r.worst_violation = fed_ ? std::max(worst_, -1e300) : 0.0;
  r.passed = r.worst_violation <= 0.0;
  return r;
}

namespace {

const check_info* registry_find(const std::string& name, const std::string& algo);

std::string anchor_of(const std::string& name, const std::string& algo) {
  const check_info* info = registry_find(name, algo);
  return info ? info->anchor : std::string();
}

void checks_gd_strong(const problem& p, int max_iters, double tol, std::uint64_t seed,
                      const reference_solution& ref, std::vector<check_result>& out) {
  strong_history h = drive_gd_strong(p, max_iters, tol, false);
  const double L = p.f.L;
  const double alpha = p.f.alpha;
  const double rate = strong_rate(p);

  ineq_check contraction, soundness, descent;
  const double xscale = ref.ok ? 1.0 + ref.xstar.squaredNorm() : 1.0;
  for (std::size_t j = 0; j < h.states.size(); ++j) {
    const gd_strong_state& st = h.states[j];
    if (j >= 1) {
      const gd_strong_state& prev = h.states[j - 1];
      contraction.require(st.xi_sq, rate * prev.xi_sq, 1e-10 * rate * prev.xi_sq);

      double seg2 = (prev.y - prev.zbar).squaredNorm();
      double ls_leak = kls_tol * L * seg2;
      descent.require(st.F_zbar,
                      prev.F_zbar - st.Gz_norm * st.Gz_norm / (2.0 * L),
                      ls_leak + 1e-12 * (1.0 + std::abs(prev.F_zbar)));
    }
    if (ref.ok) {
      double pot = (st.y - ref.xstar).squaredNorm() +
                   2.0 * (st.F_zbar - ref.Fstar) / alpha;
      soundness.require(pot, st.xi_sq,
                        1e-9 * st.xi_sq + 1e-16 * xscale +
                            1e-14 * (1.0 + std::abs(ref.Fstar)) / alpha);
    }
  }
  out.push_back(contraction.finish("radius-contraction",
                                   anchor_of("radius-contraction", "gd-strong"), seed));
  if (ref.ok)
    out.push_back(soundness.finish("radius-soundness",
                                   anchor_of("radius-soundness", "gd-strong"), seed));
  out.push_back(descent.finish("anchor-descent",
                               anchor_of("anchor-descent", "gd-strong"), seed));
}

void checks_ag(const problem& p, int max_iters, double tol, std::uint64_t seed,
               const reference_solution& ref, std::vector<check_result>& out) {
  ag_history h = drive_ag(p, max_iters, tol, ref, false);
  const double alpha = p.f.alpha;
  const double rate = ag_rate(p);

  ineq_check contraction, soundness, identity;
  const double xscale = ref.ok ? 1.0 + ref.xstar.squaredNorm() : 1.0;
  for (std::size_t j = 0; j < h.states.size(); ++j) {
    const ag_audit_state& au = h.audits[j];
    if (j >= 1)
      contraction.require(au.sigma_sq, rate * h.audits[j - 1].sigma_sq,
                          1e-10 * rate * h.audits[j - 1].sigma_sq + 1e-300);
    if (ref.ok) {
      double pot = (au.y - ref.xstar).squaredNorm() +
                   2.0 * (h.F_vals[j] - ref.Fstar) / alpha;
      soundness.require(pot, au.sigma_sq,
                        1e-9 * au.sigma_sq + 1e-16 * xscale +
                            1e-14 * (1.0 + std::abs(ref.Fstar)) / alpha);
    }
    dvec closed = ag_y_closed_form(h.states[j]);
    identity.require((au.y - closed).norm(), 0.0, 1e-10 * (1.0 + closed.norm()));
  }
  out.push_back(contraction.finish("sigma-contraction",
                                   anchor_of("sigma-contraction", "ag"), seed));
  if (ref.ok)
    out.push_back(soundness.finish("sigma-soundness",
                                   anchor_of("sigma-soundness", "ag"), seed));
  out.push_back(identity.finish("center-identity",
                                anchor_of("center-identity", "ag"), seed));
}

void checks_gd_convex(const problem& p, int max_iters, double tol, std::uint64_t seed,
                      const reference_solution& ref, std::vector<check_result>& out) {
  if (!ref.ok) return;
  convex_history h = drive_gd_convex(p, max_iters, tol, false, false);
  const double L = p.f.L;
  const dvec x0 = dvec::Zero(p.dim());
  const double F0 = eval_F(p, x0);
  const double num = convex_rate_numerator(p, x0, F0, ref);

  ineq_check potential, rate;
  double pot_prev = 0.0;
  double leak_sum = 0.0;
  for (std::size_t j = 0; j < h.states.size(); ++j) {
    const gd_convex_state& st = h.states[j];
    double pot = convex_potential(p, st.y, st.F_zbar, st.k + 1, ref.xstar, ref.Fstar);
    if (j >= 1) {
      const gd_convex_state& prev = h.states[j - 1];
      // residual of the segment search enters through the y update and
      // through the anchor decrease, with these weights
      double seg2 = (prev.y - prev.zbar).squaredNorm();
      double res = kls_tol * L * seg2;
      double gamma = (st.k + 1) / (2.0 * L);
      double weight = (st.k + 1.0) * (st.k + 2.0) / (2.0 * L);
      double leak = res * (2.0 * gamma + weight / (2.0 * L)) +
                    1e-12 * (1.0 + std::abs(prev.F_zbar)) * weight;
      leak_sum += leak;
      potential.require(pot, pot_prev, 1e-10 * (1.0 + pot_prev) + leak);

      double bound = num / (j * (j + 1.0));
      rate.require(st.F_zbar - ref.Fstar, bound,
                   1e-10 * (1.0 + std::abs(bound)) +
                       2.0 * L * leak_sum / (j * (j + 1.0)));
    }
    pot_prev = pot;
  }
  out.push_back(potential.finish("potential-nonincrease",
                                 anchor_of("potential-nonincrease", "gd-convex"), seed));
  out.push_back(rate.finish("value-rate", anchor_of("value-rate", "gd-convex"), seed));
}

void checks_gd_nonconvex(const problem& p, int max_iters, double tol, std::uint64_t seed,
                         const reference_solution& ref, std::vector<check_result>& out) {
  convex_history h = drive_gd_convex(p, max_iters, tol, true, false);
  const double L = p.f.L;
  const double F0 = eval_F(p, dvec::Zero(p.dim()));

  ineq_check decrease, grad_rate;
  double maxF = 0.0;
  for (const gd_convex_state& st : h.states) maxF = std::max(maxF, std::abs(st.F_zbar));

  double best = h.states.front().Gz_norm;  // |G(x0)|
  for (std::size_t j = 1; j < h.states.size(); ++j) {
    const gd_convex_state& st = h.states[j];
    const gd_convex_state& prev = h.states[j - 1];
    decrease.require(st.F_zbar,
                     prev.F_zbar - st.Gzbar_norm * st.Gzbar_norm / (2.0 * L),
                     1.1e-12 * (1.0 + std::abs(prev.F_zbar)));
    if (ref.ok) {
      best = std::min(best, st.best_G_norm);
      double rhs = 2.0 * L * (F0 - ref.Fstar) / (j + 1.0);
      grad_rate.require(best * best, rhs,
                        1e-10 * (1.0 + rhs) + 2.2e-12 * L * (1.0 + maxF));
    }
  }
  out.push_back(decrease.finish("sufficient-decrease",
                                anchor_of("sufficient-decrease", "gd-nonconvex"), seed));
  if (ref.ok)
    out.push_back(grad_rate.finish("min-grad-rate",
                                   anchor_of("min-grad-rate", "gd-nonconvex"), seed));
}

void checks_fista(const problem& p, int max_iters, double tol, std::uint64_t seed,
                  const reference_solution& ref, std::vector<check_result>& out) {
  if (!ref.ok) return;
  fista_history h = drive_fista(p, max_iters, tol, false);
  const double L = p.f.L;
  const double F0 = h.F_vals.front();
  const double num = 2.0 * L * ref.xstar.squaredNorm() + 4.0 * (F0 - ref.Fstar);

  ineq_check potential, rate;
  double pot_prev = 0.0;
  for (std::size_t j = 0; j < h.states.size(); ++j) {
    const fista_state& st = h.states[j];
    dvec y = fista_audit_y(st);
    double pot = (y - ref.xstar).squaredNorm() +
                 2.0 * st.a_prev * st.a_prev * (h.F_vals[j] - ref.Fstar) / L;
    if (j >= 1) {
      potential.require(pot, pot_prev, 1e-10 * (1.0 + pot_prev));
      double bound = num / ((j + 1.0) * (j + 1.0));
      rate.require(h.F_vals[j] - ref.Fstar, bound, 1e-10 * (1.0 + std::abs(bound)));
    }
    pot_prev = pot;
  }
  out.push_back(potential.finish("potential-nonincrease",
                                 anchor_of("potential-nonincrease", "fista"), seed));
  out.push_back(rate.finish("value-rate", anchor_of("value-rate", "fista"), seed));
}

void checks_trs(const problem& p, int max_iters, double tol, std::uint64_t seed,
                std::vector<check_result>& out) {
  trs_options topt;
  topt.tol = tol;
  topt.max_iters = max_iters;
  topt.record = true;
  trs_result res = trs_solve(p, topt);
  const quadratic_data& qd = *p.quad;
  const double delta = p.psi.delta;
  const double bnorm = qd.b.norm();

  {
    kkt_report kkt = kkt_certify(qd, res.x, res.mu, delta);
    ineq_check cert;
    cert.require(kkt.stationarity, 0.0, 100.0 * tol * std::max(1.0, bnorm));
    cert.require(kkt.complementarity, 0.0,
                 1e-8 * (1.0 + std::abs(res.mu)) * std::max(1.0, delta));
    cert.require(kkt.feasibility, 0.0, 1e-10 * std::max(1.0, delta));
    const double lam_span = std::abs(qd.eigenvalues(qd.eigenvalues.size() - 1)) +
                            std::abs(qd.eigenvalues(0));
    cert.require(-kkt.curvature_margin, 0.0, 1e-8 * (1.0 + lam_span));
    out.push_back(cert.finish("kkt-certificate",
                              anchor_of("kkt-certificate", "trs-lanczos"), seed));
  }

  if (p.dim() <= 60) {
    ineq_check opt_check;
    affine_span M(dvec::Zero(p.dim()));
    std::size_t used = 0;
    for (std::size_t j = 0; j < res.history.size(); ++j) {
      while (used <= j && used < res.search_directions.size())
        M.add(res.search_directions[used++]);
      if (M.dim() == 0) continue;
      dvec u = minimize_over(p, M, 1e-13);
      double f_sub = 0.5 * u.dot(qd.multiply(u)) - qd.b.dot(u);
      double f_alg = res.history[j].f;
      double slack = 1e-8 * (1.0 + std::abs(f_sub));
      opt_check.require(f_alg, f_sub, slack);
      opt_check.require(f_sub, f_alg, slack);
    }
    out.push_back(opt_check.finish("krylov-optimality",
                                   anchor_of("krylov-optimality", "trs-lanczos"), seed));
  }

  reference_solution ref = reference_optimum(p);
  if (!ref.ok) return;
  dense_trs_result oracle = dense_trs_oracle(qd, delta);
  const double f_star = oracle.f;

  {
    ineq_check agree;
    double slack = 1e-8 * (1.0 + std::abs(f_star));
    agree.require(res.f, f_star, slack);
    agree.require(f_star, res.f, slack);
    out.push_back(agree.finish("oracle-agreement",
                               anchor_of("oracle-agreement", "trs-lanczos"), seed));
  }

  const dvec& eig = qd.eigenvalues;
  spectral_bound_data sb{eig(0), eig(eig.size() - 1), oracle.mu};
  const double gap0 = -f_star;  // f(0) = 0

  {
    const bool interval_ok = sb.lam_min + sb.mu > 0.0 && sb.lam_max > sb.lam_min;
    const bool origin_ok = sb.lam_max + sb.mu > 0.0;
    if (interval_ok || origin_ok) {
      ineq_check norm;
      for (std::size_t j = 0; j < res.history.size(); ++j) {
        int k = static_cast<int>(j) + 1;
        if (interval_ok)
          norm.require(std::abs(residual_poly_interval(k, 0.0, sb) - 1.0), 0.0, 1e-12);
        if (origin_ok)
          norm.require(std::abs(residual_poly_origin(k, 0.0, sb) - 1.0), 0.0, 1e-12);
      }
      out.push_back(norm.finish("residual-normalization",
                                anchor_of("residual-normalization", "trs-lanczos"), seed));
    }
  }

  if (oracle.mu > 1e-10 * (1.0 + std::abs(eig(eig.size() - 1))) &&
      sb.lam_min + sb.mu > 0.0 && sb.lam_max > sb.lam_min) {
    ineq_check lin;
    for (std::size_t j = 0; j < res.history.size(); ++j) {
      double bound = linear_rate_bound(static_cast<int>(j) + 1, sb, gap0);
      lin.require(res.history[j].f - f_star, bound, 1e-10 * (1.0 + std::abs(bound)));
    }
    out.push_back(lin.finish("linear-value-bound",
                             anchor_of("linear-value-bound", "trs-lanczos"), seed));
  }
  if (sb.lam_max + sb.mu > 0.0) {
    ineq_check sub;
    for (std::size_t j = 0; j < res.history.size(); ++j) {
      double bound = sublinear_rate_bound(static_cast<int>(j) + 1, sb, delta);
      sub.require(res.history[j].f - f_star, bound, 1e-10 * (1.0 + std::abs(bound)));
    }
    out.push_back(sub.finish("sublinear-value-bound",
                             anchor_of("sublinear-value-bound", "trs-lanczos"), seed));
  }
}

void checks_ia_strong(const problem& p, int max_iters, double tol, std::uint64_t seed,
                      const reference_solution& ref, std::vector<check_result>& out) {
  ia_history h = drive_ia(p, max_iters, tol, ref, true);
  const double alpha = p.f.alpha;
  const double rate = strong_rate(p);

  ineq_check contraction;
  double pot_prev = knan;
  for (std::size_t j = 0; j < h.res.steps.size(); ++j) {
    const ia_record& rec = h.res.steps[j];
    double pot = (rec.y - ref.xstar).squaredNorm() +
                 2.0 * (rec.F_x - ref.Fstar) / alpha;
    if (j >= 1)
      contraction.require(pot, rate * pot_prev,
                          1e-9 * (1.0 + rate * pot_prev));
    pot_prev = pot;
  }
  out.push_back(contraction.finish("potential-contraction",
                                   anchor_of("potential-contraction", "ia-strong"), seed));
}

void checks_ia_convex(const problem& p, int max_iters, double tol, std::uint64_t seed,
                      const reference_solution& ref, std::vector<check_result>& out) {
  ia_history h = drive_ia(p, max_iters, tol, ref, false);
  const double L = p.f.L;

  if (p.f.convex) {
    ineq_check potential, rate;
    const double num = convex_rate_numerator(p, dvec::Zero(p.dim()), h.F0, ref);
    double pot_prev = knan;
    for (std::size_t j = 0; j < h.res.steps.size(); ++j) {
      const ia_record& rec = h.res.steps[j];
      const int k = static_cast<int>(j) + 1;
      double pot = convex_potential(p, rec.y, rec.F_x, k, ref.xstar, ref.Fstar);
      if (j >= 1) potential.require(pot, pot_prev, 1e-9 * (1.0 + pot_prev));
      double bound = num / (k * (k + 1.0));
      rate.require(rec.F_x - ref.Fstar, bound, 1e-9 * (1.0 + std::abs(bound)));
      pot_prev = pot;
    }
    out.push_back(potential.finish("potential-nonincrease",
                                   anchor_of("potential-nonincrease", "ia-convex"), seed));
    out.push_back(rate.finish("value-rate", anchor_of("value-rate", "ia-convex"), seed));
  }

  ineq_check descent, grad_rate;
  double F_prev = h.F_xbar0;
  double best = h.pg0.Gnorm;
  for (std::size_t j = 0; j < h.res.steps.size(); ++j) {
    const ia_record& rec = h.res.steps[j];
    descent.require(rec.F_xbar, F_prev - rec.Gx_norm * rec.Gx_norm / (2.0 * L),
                    1e-9 * (1.0 + std::abs(F_prev)));
    best = std::min(best, rec.Gx_norm);
    double rhs = 2.0 * L * (h.F0 - ref.Fstar) / (j + 2.0);
    grad_rate.require(best * best, rhs, 1e-9 * (1.0 + rhs));
    F_prev = rec.F_xbar;
  }
  out.push_back(descent.finish("anchor-descent",
                               anchor_of("anchor-descent", "ia-convex"), seed));
  out.push_back(grad_rate.finish("min-grad-rate",
                                 anchor_of("min-grad-rate", "ia-convex"), seed));
}

}  // namespace

const std::vector<check_info>& check_registry() {
  static const std::vector<check_info> reg = {
      {"radius-contraction", "xi2[k+1] <= (1 - sqrt(alpha/L)) xi2[k]", "gd-strong"},
      {"radius-soundness",
       "xi2[k] >= |y_k - x*|^2 + 2 (F(zbar[k-1]) - F*) / alpha", "gd-strong"},
      {"anchor-descent", "F(zbar[k]) <= F(zbar[k-1]) - |G(z_k)|^2 / (2L)", "gd-strong"},
      {"sigma-contraction", "sigma2[k+1] <= (1 - sqrt(alpha/L)) sigma2[k]", "ag"},
      {"sigma-soundness", "sigma2[k] >= |y_k - x*|^2 + 2 (F(x_k) - F*) / alpha", "ag"},
      {"center-identity", "y_k = (sqrt(L/alpha) + 1) w_k - sqrt(L/alpha) x_k", "ag"},
      {"potential-nonincrease",
       "|y_{k+1} - x*|^2 + (k+1)(k+2) (F(zbar[k]) - F*) / (2L) never grows",
       "gd-convex"},
      {"value-rate",
       "F(zbar[k]) - F* <= (2L |x0 - x*|^2 + 2 (F(x0) - F*)) / (k(k+1))", "gd-convex"},
      {"sufficient-decrease",
       "F(zbar[k]) <= F(zbar[k-1]) - |G(zbar[k-1])|^2 / (2L)", "gd-nonconvex"},
      {"min-grad-rate",
       "min over anchors of |G| <= sqrt(2L (F(x0) - F*) / (k+1))", "gd-nonconvex"},
      {"potential-nonincrease",
       "|y_k - x*|^2 + 2 a[k-1]^2 (F(x_k) - F*) / L never grows", "fista"},
      {"value-rate",
       "F(x_k) - F* <= (2L |x0 - x*|^2 + 4 (F(x0) - F*)) / (k+1)^2", "fista"},
      {"kkt-certificate",
       "(A + mu I) x = b, mu (|x| - Delta) = 0, |x| <= Delta, A + mu I psd",
       "trs-lanczos"},
      {"krylov-optimality",
       "f(x_k) equals the minimum of f over the order-k Krylov space cut to the ball",
       "trs-lanczos"},
      {"oracle-agreement",
       "the final value matches the dense eigensolver reference", "trs-lanczos"},
      {"residual-normalization",
       "q(0) = 1 for both residual polynomial families", "trs-lanczos"},
      {"linear-value-bound",
       "f(x_k) - f* <= 6 c_k (f(x0) - f*) whenever mu* > 0", "trs-lanczos"},
      {"sublinear-value-bound",
       "f(x_k) - f* <= 3 (lam_n + mu*) Delta^2 / (2 (k+1)^2)", "trs-lanczos"},
      {"potential-contraction",
       "|y_k - x*|^2 + 2 (F(x_k) - F*) / alpha contracts by 1 - sqrt(alpha/L)",
       "ia-strong"},
      {"potential-nonincrease",
       "|y_k - x*|^2 + k(k+1) (F(x_k) - F*) / (2L) never grows", "ia-convex"},
      {"value-rate",
       "F(x_k) - F* <= (2L |x0 - x*|^2 + 2 (F(x0) - F*)) / (k(k+1))", "ia-convex"},
      {"anchor-descent", "F(xbar[k]) <= F(xbar[k-1]) - |G(x_k)|^2 / (2L)", "ia-convex"},
      {"min-grad-rate", "min_j |G(x_j)| <= sqrt(2L (F(x0) - F*) / (k+1))", "ia-convex"},
  };
  return reg;
}

namespace {

const check_info* registry_find(const std::string& name, const std::string& algo) {
  for (const check_info& c : check_registry())
    if (c.name == name && c.algo == algo) return &c;
  return nullptr;
}

}  // namespace

std::vector<check_result> run_checks(const problem& p, const std::string& algo,
                                     int max_iters, double tol, std::uint64_t seed_label) {
  std::string why;
  if (!algorithm_compatible(p, algo, &why))
    throw precondition_error(algo + ": " + why);

  reference_solution ref = reference_optimum(p);
  std::vector<check_result> out;
  if (algo == "gd-strong")
    checks_gd_strong(p, max_iters, tol, seed_label, ref, out);
  else if (algo == "ag")
    checks_ag(p, max_iters, tol, seed_label, ref, out);
  else if (algo == "gd-convex")
    checks_gd_convex(p, max_iters, tol, seed_label, ref, out);
  else if (algo == "gd-nonconvex")
    checks_gd_nonconvex(p, max_iters, tol, seed_label, ref, out);
  else if (algo == "fista")
    checks_fista(p, max_iters, tol, seed_label, ref, out);
  else if (algo == "trs-lanczos")
    checks_trs(p, max_iters, tol, seed_label, out);
  else if (algo == "ia-strong") {
    if (!ref.ok) throw precondition_error("ia-strong: no reference optimum: " + ref.why);
    checks_ia_strong(p, max_iters, tol, seed_label, ref, out);
  } else if (algo == "ia-convex") {
    if (!ref.ok) throw precondition_error("ia-convex: no reference optimum: " + ref.why);
    checks_ia_convex(p, max_iters, tol, seed_label, ref, out);
  }
  return out;
}

bool verification_report::all_passed() const {
  for (const check_result& c : checks)
    if (!c.passed) return false;
  return true;
}

verification_report verify_algorithm(const loaded_problem& lp, const std::string& algo,
                                     const std::vector<std::uint64_t>& seeds,
                                     int max_iters, double tol) {
  verification_report rep;
  rep.algorithm = algo;

  if (seeds.empty()) {
    std::uint64_t label = 0;
    if (lp.generator.is_object() && lp.generator.contains("seed"))
      label = lp.generator["seed"].get<std::uint64_t>();
    rep.checks = run_checks(lp.p, algo, max_iters, tol, label);
  } else {
    if (!lp.generator.is_object())
      throw precondition_error(
          "seeded verification needs generator metadata in the problem file");
    generator_spec base = spec_from_json(lp.generator);
    std::vector<std::vector<check_result>> buckets(seeds.size());
    std::exception_ptr err;
    const long long count = static_cast<long long>(seeds.size());
#pragma omp parallel for schedule(dynamic) num_threads(kernels::thread_count())
    for (long long i = 0; i < count; ++i) {
      try {
        generator_spec s = base;
        s.seed = seeds[static_cast<std::size_t>(i)];
        loaded_problem sib = generate_problem(s);
        buckets[static_cast<std::size_t>(i)] =
            run_checks(sib.p, algo, max_iters, tol, s.seed);
      } catch (...) {
#pragma omp critical
        if (!err) err = std::current_exception();
      }
    }
    if (err) std::rethrow_exception(err);
    for (std::vector<check_result>& b : buckets)
      for (check_result& c : b) rep.checks.push_back(std::move(c));
  }

  std::stable_sort(rep.checks.begin(), rep.checks.end(),
                   [](const check_result& a, const check_result& b) {
                     if (a.name != b.name) return a.name < b.name;
                     return a.seed < b.seed;
                   });
  return rep;
}

nlohmann::json report_to_json(const verification_report& rep) {
  nlohmann::json checks = nlohmann::json::array();
  for (const check_result& c : rep.checks) {
    checks.push_back({{"check_name", c.name},
                      {"anchor", c.anchor},
                      {"seed", c.seed},
                      {"passed", c.passed},
                      {"worst_violation", c.worst_violation}});
  }
  return nlohmann::json{{"algorithm", rep.algorithm},
                        {"all_passed", rep.all_passed()},
                        {"checks", std::move(checks)}};
}

}  // namespace compass
