#include "compass/problem.hpp"

#include "compass/kernels.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>

namespace compass {

void ensure_finite(const dvec& v, const std::string& name) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i]))
      throw precondition_error(name + " has a non-finite entry at index " + std::to_string(i));
  }
}

void ensure_size(const dvec& v, Eigen::Index n, const std::string& name) {
  if (v.size() != n)
    throw precondition_error(name + " has size " + std::to_string(v.size()) +
                             ", expected " + std::to_string(n));
}

namespace {

constexpr double kFeasSlack = 1e-12;

}  // namespace

double simple_term::value(const dvec& x) const {
  switch (kind) {
    case psi_kind::zero:
      return 0.0;
    case psi_kind::ball:
    case psi_kind::box:
      return feasible(x) ? 0.0 : std::numeric_limits<double>::infinity();
    case psi_kind::l1:
      return weight * x.lpNorm<1>();
  }
  return 0.0;
}

bool simple_term::feasible(const dvec& x) const {
  switch (kind) {
    case psi_kind::zero:
    case psi_kind::l1:
      return true;
    case psi_kind::ball:
      return x.norm() - delta <= kFeasSlack * (1.0 + delta);
    case psi_kind::box: {
      for (Eigen::Index i = 0; i < x.size(); ++i) {
        double s_lo = kFeasSlack * (1.0 + std::abs(lower[i]));
        double s_hi = kFeasSlack * (1.0 + std::abs(upper[i]));
        if (x[i] < lower[i] - s_lo || x[i] > upper[i] + s_hi) return false;
      }
      return true;
    }
  }
  return true;
}

simple_term zero_term() { return {}; }

simple_term ball_term(double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta))
    throw precondition_error("ball radius must be positive and finite");
  simple_term t;
  t.kind = psi_kind::ball;
  t.delta = delta;
  return t;
}

simple_term box_term(dvec lower, dvec upper) {
  if (lower.size() != upper.size())
    throw precondition_error("box bounds differ in size");
  ensure_finite(lower, "box lower bound");
  ensure_finite(upper, "box upper bound");
  for (Eigen::Index i = 0; i < lower.size(); ++i)
    if (lower[i] > upper[i]) throw precondition_error("box has lower[i] > upper[i]");
  simple_term t;
  t.kind = psi_kind::box;
  t.lower = std::move(lower);
  t.upper = std::move(upper);
  return t;
}

simple_term l1_term(double weight) {
  if (!(weight >= 0.0) || !std::isfinite(weight))
    throw precondition_error("l1 weight must be nonnegative and finite");
  simple_term t;
  t.kind = psi_kind::l1;
  t.weight = weight;
  return t;
}

dvec quadratic_data::multiply(const dvec& x) const {
  dvec y;
  if (diagonal)
    kernels::diag_mv(diag, x, y);
  else
    kernels::symv(A, x, y);
  return y;
}

namespace {

// Shared constant extraction: L is the largest curvature magnitude,
// alpha the smallest eigenvalue when meaningfully positive.
void set_constants(smooth_oracle& f, const dvec& eigenvalues) {
  double lo = eigenvalues[0];
  double hi = eigenvalues[eigenvalues.size() - 1];
  f.L = std::max(std::abs(lo), std::abs(hi));
  if (f.L <= 0.0) throw precondition_error("quadratic has zero curvature everywhere");
  double floor = 1e-10 * f.L;
  f.convex = lo >= -floor;
  f.alpha = lo > floor ? lo : 0.0;
}

problem finish_quadratic(std::shared_ptr<quadratic_data> qd, simple_term psi) {
  ensure_finite(qd->b, "b");
  if (psi.kind == psi_kind::box) ensure_size(qd->b, psi.lower.size(), "b");

  smooth_oracle f;
  f.dim = qd->dim();
  set_constants(f, qd->eigenvalues);
  std::shared_ptr<const quadratic_data> q = qd;
  f.value = [q](const dvec& x) {
    return 0.5 * x.dot(q->multiply(x)) - q->b.dot(x);
  };
  f.gradient = [q](const dvec& x) {
    dvec g = q->multiply(x);
    g -= q->b;
    return g;
  };

  problem p;
  p.f = std::move(f);
  p.psi = std::move(psi);
  p.quad = q;
  return p;
}

}  // namespace

problem make_quadratic(dmat A, dvec b, simple_term psi) {
  if (A.rows() != A.cols()) throw precondition_error("matrix is not square");
  ensure_size(b, A.rows(), "b");
  double scale = A.cwiseAbs().maxCoeff();
  double asym = (A - A.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * std::max(scale, 1.0))
    throw precondition_error("matrix is not symmetric");

  auto qd = std::make_shared<quadratic_data>();
  qd->diagonal = false;
  qd->A = std::move(A);
  qd->b = std::move(b);
  Eigen::SelfAdjointEigenSolver<dmat> es(qd->A, Eigen::EigenvaluesOnly);
  qd->eigenvalues = es.eigenvalues();
  return finish_quadratic(std::move(qd), std::move(psi));
}

problem make_quadratic_diagonal(dvec diag, dvec b, simple_term psi) {
  ensure_finite(diag, "diagonal");
  ensure_size(b, diag.size(), "b");
  auto qd = std::make_shared<quadratic_data>();
  qd->diagonal = true;
  qd->diag = std::move(diag);
  qd->b = std::move(b);
  qd->eigenvalues = qd->diag;
  std::sort(qd->eigenvalues.data(), qd->eigenvalues.data() + qd->eigenvalues.size());
  return finish_quadratic(std::move(qd), std::move(psi));
}

problem make_custom(smooth_oracle f, simple_term psi) {
  if (!f.value || !f.gradient) throw precondition_error("oracle callbacks missing");
  if (!(f.L > 0.0) || !std::isfinite(f.L))
    throw precondition_error("oracle smoothness constant must be positive and finite");
  if (!(f.alpha >= 0.0) || f.alpha > f.L)
    throw precondition_error("oracle strong convexity modulus out of range");
  if (f.dim <= 0) throw precondition_error("oracle dimension must be positive");
  problem p;
  p.f = std::move(f);
  p.psi = std::move(psi);
  return p;
}

double eval_f(const problem& p, const dvec& x) {
  ensure_size(x, p.dim(), "x");
  return p.f.value(x);
}

double eval_F(const problem& p, const dvec& x) {
  ensure_size(x, p.dim(), "x");
  double psi_val = p.psi.value(x);
  if (std::isinf(psi_val)) return psi_val;
  return p.f.value(x) + psi_val;
}

}  // namespace compass
