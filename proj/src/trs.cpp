#include "compass/trs.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>

namespace compass {

namespace {

// Factor T + mu I = L D L' for symmetric tridiagonal T and solve against
// rhs.  Returns false on a nonpositive pivot, i.e. when T + mu I is not
// positive definite.
bool tridiag_spd_solve(const std::vector<double>& d, const std::vector<double>& e,
                       double mu, const dvec& rhs, dvec& out) {
  const int m = static_cast<int>(d.size());
  std::vector<double> piv(m), l(m > 1 ? m - 1 : 0);
  piv[0] = d[0] + mu;
  if (!(piv[0] > 0.0)) return false;
  for (int i = 1; i < m; ++i) {
    l[i - 1] = e[i - 1] / piv[i - 1];
    piv[i] = d[i] + mu - l[i - 1] * e[i - 1];
    if (!(piv[i] > 0.0)) return false;
  }
  out = rhs;
  for (int i = 1; i < m; ++i) out[i] -= l[i - 1] * out[i - 1];
  for (int i = 0; i < m; ++i) out[i] /= piv[i];
  for (int i = m - 2; i >= 0; --i) out[i] -= l[i] * out[i + 1];
  return true;
}

}  // namespace

tridiag_trs_result solve_tridiagonal_trs(const std::vector<double>& diag,
                                         const std::vector<double>& off, double r0_norm,
                                         double delta, double rel_tol) {
  const int m = static_cast<int>(diag.size());
  if (m == 0) throw precondition_error("empty tridiagonal system");
  if (off.size() + 1 != diag.size())
    throw precondition_error("off-diagonal size must be one less than the diagonal");
  if (!(delta > 0.0)) throw precondition_error("radius must be positive");
  if (!(r0_norm >= 0.0)) throw precondition_error("negative right-hand norm");

  dvec rhs = dvec::Zero(m);
  rhs[0] = r0_norm;

  tridiag_trs_result res;
  if (tridiag_spd_solve(diag, off, 0.0, rhs, res.h)) {
    res.h_norm = res.h.norm();
    if (res.h_norm <= delta) return res;
  }

  // Boundary root: 1/||h(mu)|| grows monotonically to 1/delta on (lo, hi].
  double maxrow = 0.0;
  for (int i = 0; i < m; ++i) {
    double row = std::abs(diag[i]);
    if (i > 0) row += std::abs(off[i - 1]);
    if (i + 1 < m) row += std::abs(off[i]);
    maxrow = std::max(maxrow, row);
  }
  double lo = 0.0;
  double hi = r0_norm / delta + maxrow;
  double mu = 0.5 * (lo + hi);
  res.boundary = true;

  for (int it = 1; it <= 100; ++it) {
    res.iterations = it;
    dvec h;
    if (!tridiag_spd_solve(diag, off, mu, rhs, h)) {
      lo = mu;
      mu = 0.5 * (lo + hi);
      continue;
    }
    double nh = h.norm();
    if (std::abs(nh - delta) <= rel_tol * delta) {
      res.h = std::move(h);
      res.h_norm = nh;
      res.mu = mu;
      return res;
    }
    if (nh > delta)
      lo = mu;
    else
      hi = mu;
    // Newton step on 1/||h|| - 1/delta, clamped into the bracket.
    dvec w;
    tridiag_spd_solve(diag, off, mu, h, w);
    double dphi = h.dot(w) / (nh * nh * nh);
    double phi = 1.0 / nh - 1.0 / delta;
    double next = mu - phi / dphi;
    mu = (next > lo && next < hi) ? next : 0.5 * (lo + hi);
  }
  throw no_convergence_error("tridiagonal secular iteration exhausted its budget");
}

kkt_report kkt_certify(const quadratic_data& qd, const dvec& x, double mu, double delta) {
  kkt_report rep;
  dvec res = qd.multiply(x) + mu * x - qd.b;
  rep.stationarity = res.norm();
  double nx = x.norm();
  rep.complementarity = std::abs(mu * (nx - delta));
  rep.feasibility = std::max(0.0, nx - delta);
  rep.curvature_margin = qd.eigenvalues[0] + mu;
  return rep;
}

namespace {

struct spectral_solution {
  dvec xt;  // solution in eigen coordinates
  double mu = 0.0;
};

// Multiplier rootfind in an explicit eigenbasis; lam need not be sorted.
spectral_solution solve_in_eigenbasis(const dvec& lam, const dvec& bt, double delta) {
  const Eigen::Index n = lam.size();
  double lam1 = lam.minCoeff();
  double spread = lam.maxCoeff() - lam1;
  double scale = std::max({std::abs(lam1), std::abs(lam.maxCoeff()), 1e-300});
  double b_norm = bt.norm();

  auto assemble = [&](double mu) {
    dvec xt(n);
    for (Eigen::Index i = 0; i < n; ++i) xt[i] = bt[i] / (lam[i] + mu);
    return xt;
  };

  // Interior candidate at mu = 0, valid only for positive semidefinite
  // curvature and b carrying no weight on (numerically) zero modes.
  if (lam1 > -1e-14 * scale) {
    dvec xt = dvec::Zero(n);
    bool ok = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (lam[i] <= 1e-14 * scale) {
        if (std::abs(bt[i]) > 1e-13 * (1.0 + b_norm)) {
          ok = false;
          break;
        }
      } else {
        xt[i] = bt[i] / lam[i];
      }
    }
    if (ok && xt.norm() <= delta) return {xt, 0.0};
  }

  double lo = std::max(0.0, -lam1);
  double cluster = 1e-10 * std::max(spread, scale);
  double w_bottom = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    if (lam[i] <= lam1 + cluster) w_bottom += bt[i] * bt[i];
  if (w_bottom <= 1e-24 * (1.0 + b_norm * b_norm) && lo > 0.0) {
    // b has no weight on the bottom eigenspace; the norm stays bounded as
    // mu drops to -lam1, and if it stays under delta no multiplier works.
    double limit_sq = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
      if (lam[i] > lam1 + cluster) {
        double c = bt[i] / (lam[i] + lo);
        limit_sq += c * c;
      }
    if (std::sqrt(limit_sq) < delta * (1.0 - 1e-9))
      throw precondition_error(
          "degenerate instance: no weight on the bottom eigenspace and the limit "
          "solution is interior");
  }

  double hi = lo + b_norm / delta + 1e-300;
  double mu = lo + 0.5 * (hi - lo);
  for (int it = 1; it <= 200; ++it) {
    dvec xt = assemble(mu);
    double nx = xt.norm();
    if (std::abs(nx - delta) <= 1e-13 * delta) return {std::move(xt), mu};
    if (nx > delta)
      lo = mu;
    else
      hi = mu;
    double dphi = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      double li = lam[i] + mu;
      dphi += xt[i] * xt[i] / li;
    }
    dphi /= nx * nx * nx;
    double phi = 1.0 / nx - 1.0 / delta;
    double next = mu - phi / dphi;
    mu = (next > lo && next < hi) ? next : 0.5 * (lo + hi);
  }
  throw no_convergence_error("multiplier rootfind exhausted its budget");
}

double quad_value(const quadratic_data& qd, const dvec& x) {
  return 0.5 * x.dot(qd.multiply(x)) - qd.b.dot(x);
}

}  // namespace

dense_trs_result dense_trs_oracle(const quadratic_data& qd, double delta) {
  if (!(delta > 0.0)) throw precondition_error("radius must be positive");
  dense_trs_result out;
  if (qd.diagonal) {
    spectral_solution s = solve_in_eigenbasis(qd.diag, qd.b, delta);
    out.x = std::move(s.xt);
    out.mu = s.mu;
  } else {
    Eigen::SelfAdjointEigenSolver<dmat> es(qd.A);
    if (es.info() != Eigen::Success) throw no_convergence_error("eigendecomposition failed");
    dvec bt = es.eigenvectors().transpose() * qd.b;
    spectral_solution s = solve_in_eigenbasis(es.eigenvalues(), bt, delta);
    out.x = es.eigenvectors() * s.xt;
    out.mu = s.mu;
  }
  out.f = quad_value(qd, out.x);
  out.kkt = kkt_certify(qd, out.x, out.mu, delta);
  return out;
}

dense_trs_result dense_trs_small(const dmat& B, const dvec& g, double delta) {
  if (B.rows() != B.cols()) throw precondition_error("matrix is not square");
  ensure_size(g, B.rows(), "g");
  Eigen::SelfAdjointEigenSolver<dmat> es(B);
  if (es.info() != Eigen::Success) throw no_convergence_error("eigendecomposition failed");
  dvec gt = es.eigenvectors().transpose() * g;
  spectral_solution s = solve_in_eigenbasis(es.eigenvalues(), gt, delta);
  dense_trs_result out;
  out.x = es.eigenvectors() * s.xt;
  out.mu = s.mu;
  out.f = 0.5 * out.x.dot(B * out.x) - g.dot(out.x);
  dvec res = B * out.x + s.mu * out.x - g;
  out.kkt.stationarity = res.norm();
  double nx = out.x.norm();
  out.kkt.complementarity = std::abs(s.mu * (nx - delta));
  out.kkt.feasibility = std::max(0.0, nx - delta);
  out.kkt.curvature_margin = es.eigenvalues()[0] + s.mu;
  return out;
}

trs_result trs_solve(const quadratic_data& qd, double delta, trs_options opt) {
  if (!(delta > 0.0)) throw precondition_error("radius must be positive");
  const Eigen::Index n = qd.dim();
  const int max_iters = opt.max_iters > 0 ? opt.max_iters : static_cast<int>(n) + 5;
  const bool reorth = opt.reorth < 0 ? n <= 500 : opt.reorth != 0;
  const double b_norm = qd.b.norm();
  const double stop_scale = std::max(1.0, b_norm);

  trs_result res;
  res.x = dvec::Zero(n);
  if (b_norm == 0.0) {
    if (qd.eigenvalues[0] < 0.0)
      throw breakdown_error("zero right-hand side with negative curvature");
    res.converged = true;
    return res;
  }

  dvec r = qd.b, p = qd.b;
  double rr = r.squaredNorm();
  double sign = 1.0;
  double beta_prev = 0.0, inv_alpha_prev = 0.0;
  std::vector<double> tdiag, toff;
  dmat Q(n, 0);
  dvec Aq_prev;

  for (int k = 0; k < max_iters; ++k) {
    // Basis vector first.  If the cleaned direction collapses onto the span
    // of the previous ones, the subspace is complete and further iterations
    // would only feed rounding noise into the projected model, so stop
    // growing it.  The last boundary solve and certificate already cover
    // everything this space has to offer.
    dvec q = (sign / std::sqrt(rr)) * r;
    if (reorth && k > 0) {
      for (int pass = 0; pass < 2; ++pass)
        q -= Q.leftCols(k) * (Q.leftCols(k).transpose() * q);
      double nq = q.norm();
      if (nq <= 1e-8 || k >= static_cast<int>(n)) break;
      q /= nq;
    }

    if (opt.record) res.search_directions.push_back(p);
    dvec Ap = qd.multiply(p);
    double denom = p.dot(Ap);
    double inv_alpha = denom / rr;
    bool degenerate = !(denom > 0.0);

    if (reorth) {
      // With a reorthogonalized basis the projected matrix has to be formed
      // from the basis itself.  The scalar recurrences track the raw vectors,
      // which drift away from the cleaned ones as the residual shrinks, and a
      // model mixed from the two caps the accuracy of the mapped-back
      // solution several orders above working precision.
      dvec Aq = qd.multiply(q);
      if (k > 0) toff.push_back(q.dot(Aq_prev));
      tdiag.push_back(q.dot(Aq));
      Aq_prev = std::move(Aq);
    } else if (k > 0) {
      toff.push_back(std::sqrt(beta_prev) * std::abs(inv_alpha_prev));
      tdiag.push_back(inv_alpha + beta_prev * inv_alpha_prev);
    } else {
      tdiag.push_back(inv_alpha);
    }

    Q.conservativeResize(Eigen::NoChange, k + 1);
    Q.col(k) = q;

    if (!res.boundary && !degenerate) {
      dvec x_cg = res.x + (rr / denom) * p;
      if (x_cg.norm() >= delta)
        res.boundary = true;
      else
        res.x = std::move(x_cg);
    }
    if (degenerate) res.boundary = true;
    if (res.boundary) {
      tridiag_trs_result sub = solve_tridiagonal_trs(tdiag, toff, b_norm, delta, 1e-12);
      res.x = Q * sub.h;
      res.mu = sub.mu;
    }
    res.iterations = k + 1;

    if (opt.record) {
      trs_iterate it;
      it.x = res.x;
      it.f = quad_value(qd, res.x);
      it.mu = res.mu;
      it.boundary = res.boundary;
      res.history.push_back(std::move(it));
    }

    if (degenerate) {
      // The coefficient broke down; legal only if the subproblem already
      // certifies the answer.
      kkt_report rep = kkt_certify(qd, res.x, res.mu, delta);
      if (rep.stationarity <= opt.tol * stop_scale) {
        res.converged = true;
        break;
      }
      throw breakdown_error("nonpositive curvature along a search direction");
    }

    double alpha = rr / denom;
    dvec r_next = r - alpha * Ap;
    double rr_next = r_next.squaredNorm();
    double beta = rr_next / rr;
    beta_prev = beta;
    inv_alpha_prev = inv_alpha;
    if (inv_alpha > 0.0) sign = -sign;
    p = beta * p + r_next;
    r = std::move(r_next);
    rr = rr_next;

    if (!res.boundary && std::sqrt(rr) <= opt.tol * b_norm) {
      res.converged = true;
      break;
    }
    if (res.boundary) {
      kkt_report rep = kkt_certify(qd, res.x, res.mu, delta);
      if (rep.stationarity <= opt.tol * stop_scale) {
        res.converged = true;
        break;
      }
    }
    // A residual at the rounding floor has no directions left to offer.
    if (std::sqrt(rr) <= 64.0 * std::numeric_limits<double>::epsilon() * b_norm) break;
  }
  res.f = quad_value(qd, res.x);
  return res;
}

trs_result trs_solve(const problem& p, trs_options opt) {
  if (!p.quad) throw precondition_error("solver needs explicit quadratic data");
  if (p.psi.kind != psi_kind::ball)
    throw precondition_error("solver needs a ball constraint");
  return trs_solve(*p.quad, p.psi.delta, opt);
}

}  // namespace compass
