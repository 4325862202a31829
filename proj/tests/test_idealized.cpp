#include <doctest.h>

#include "compass/geometry.hpp"
#include "compass/idealized.hpp"
#include "compass/prox.hpp"
#include "compass/trs.hpp"

#include <cmath>

using namespace compass;

namespace {

affine_span full_span(rng& r, const dvec& anchor) {
  affine_span M(anchor);
  while (M.dim() < anchor.size()) M.add(r.normal_vector(anchor.size()));
  return M;
}

dvec l1_minimizer_or_zero(const dvec& d, const dvec& b, double w) {
  dvec xs(d.size());
  for (Eigen::Index i = 0; i < d.size(); ++i) {
    double s = std::abs(b[i]) <= w ? 0.0 : b[i] - (b[i] > 0.0 ? w : -w);
    xs[i] = d[i] > 0.0 ? s / d[i] : 0.0;
  }
  return xs;
}

}  // namespace

TEST_SUITE("idealized") {

TEST_CASE("the affine set keeps an orthonormal basis and projects onto itself") {
  rng r(81);
  const Eigen::Index n = 10;
  dvec anchor = r.normal_vector(n);
  affine_span M(anchor);
  CHECK(M.dim() == 0);
  CHECK((M.project(r.normal_vector(n)) - anchor).norm() == 0.0);

  for (int j = 0; j < 6; ++j) CHECK(M.add(r.normal_vector(n)));
  CHECK(M.dim() == 6);

  dmat gram = M.V.transpose() * M.V;
  CHECK((gram - dmat::Identity(6, 6)).norm() <= 1e-13);
  CHECK((M.V.transpose() * M.c).norm() <= 1e-12 * (1.0 + anchor.norm()));

  // dependent and zero directions are rejected without changing the set
  CHECK(!M.add(2.0 * M.V.col(3)));
  CHECK(!M.add(dvec::Zero(n)));
  CHECK(M.dim() == 6);

  // the original anchor stays inside the set as the dimension grows
  CHECK((M.project(anchor) - anchor).norm() <= 1e-12 * (1.0 + anchor.norm()));

  dvec q = r.normal_vector(n);
  dvec pr = M.project(q);
  CHECK((M.project(pr) - pr).norm() <= 1e-12 * (1.0 + pr.norm()));
  CHECK((M.V.transpose() * (q - pr)).norm() <= 1e-12 * (1.0 + q.norm()));
}

TEST_CASE("full-dimensional subspace minimization reproduces the oracles") {
  rng r(82);
  const Eigen::Index n = 8;
  dvec d(n);
  for (Eigen::Index i = 0; i < n; ++i) d[i] = r.uniform(0.5, 4.0);
  dvec b = r.normal_vector(n);
  affine_span M = full_span(r, r.normal_vector(n));
  REQUIRE(M.dim() == n);

  // no extra term: the linear solve
  problem p0 = make_quadratic_diagonal(d, b, zero_term());
  dvec want = b.cwiseQuotient(d);
  CHECK((minimize_over(p0, M) - want).norm() <= 1e-9 * (1.0 + want.norm()));

  // ball: the dense trust-region oracle
  problem pb = make_quadratic_diagonal(d, b, ball_term(0.8));
  dense_trs_result oracle = dense_trs_oracle(*pb.quad, 0.8);
  dvec got = minimize_over(pb, M);
  CHECK((got - oracle.x).norm() <= 1e-8 * (1.0 + oracle.x.norm()));
  CHECK(eval_F(pb, got) <= oracle.f + 1e-9 * (1.0 + std::abs(oracle.f)));

  // l1: coordinatewise soft thresholding
  problem pl = make_quadratic_diagonal(d, b, l1_term(0.3));
  dvec xs = l1_minimizer_or_zero(d, b, 0.3);
  CHECK((minimize_over(pl, M) - xs).norm() <= 1e-8 * (1.0 + xs.norm()));

  // box indicators have no reduced solver
  problem px = make_quadratic_diagonal(d, b, box_term(-dvec::Ones(n), dvec::Ones(n)));
  CHECK_THROWS_AS(minimize_over(px, M), precondition_error);

  // unbounded descent directions are refused, not silently truncated
  dvec dneg = d;
  dneg[0] = -1.0;
  problem pn = make_quadratic_diagonal(dneg, 2.0 * dvec::Ones(n), zero_term());
  CHECK_THROWS_AS(minimize_over(pn, M), precondition_error);
}

TEST_CASE("a zero-dimensional set reduces the ball case to its anchor") {
  dvec inside = dvec::Constant(4, 0.1);
  dvec d = dvec::Ones(4);
  problem p = make_quadratic_diagonal(d, dvec::Ones(4), ball_term(1.0));
  affine_span M(inside);
  CHECK((minimize_over(p, M) - inside).norm() == 0.0);

  affine_span far(dvec::Constant(4, 2.0));
  CHECK_THROWS_AS(minimize_over(p, far), precondition_error);
}

TEST_CASE("the strongly convex reference run contracts its potential") {
  rng r(83);
  const Eigen::Index n = 16;
  dvec d(n);
  for (Eigen::Index i = 0; i < n; ++i)
    d[i] = std::exp(r.uniform(0.0, std::log(100.0)));
  d[0] = 1.0;
  d[n - 1] = 100.0;
  problem p = make_quadratic_diagonal(d, 3.0 * r.normal_vector(n), ball_term(1.0));
  const double a = p.f.alpha;
  const double L = p.f.L;
  const double rate = 1.0 - std::sqrt(a / L);

  dense_trs_result oracle = dense_trs_oracle(*p.quad, 1.0);
  const dvec& xstar = oracle.x;
  const double Fstar = oracle.f;

  ia_options opt;
  opt.iters = 25;
  opt.ls_tol = 1e-13;
  ia_result run = ia_strong_run(p, 0.2 * r.normal_vector(n), xstar, opt);
  REQUIRE(run.steps.size() == 25);

  auto potential = [&](const ia_record& rec) {
    return (rec.y - xstar).squaredNorm() + 2.0 * (rec.F_x - Fstar) / a;
  };

  const double phi0 = potential(run.steps[0]);
  double phi = phi0;
  for (std::size_t j = 1; j < run.steps.size(); ++j) {
    const ia_record& rec = run.steps[j];
    double segsq = (rec.y - rec.x).squaredNorm();
    double slack = 8.0 * opt.ls_tol * L * segsq / a + 1e-10 * (1.0 + phi0);
    double next = potential(rec);
    CHECK(next <= rate * phi + slack);
    phi = next;

    // the subspace only gains the one mapping direction per iteration
    CHECK(rec.subspace_dim >= run.steps[j - 1].subspace_dim);
    CHECK(rec.subspace_dim <= run.steps[j - 1].subspace_dim + 1);
  }
}

TEST_CASE("each contraction step is witnessed by a two-ball combination") {
  rng r(84);
  const Eigen::Index n = 12;
  dvec d(n);
  for (Eigen::Index i = 0; i < n; ++i) d[i] = r.uniform(1.0, 40.0);
  problem p = make_quadratic_diagonal(d, 2.0 * r.normal_vector(n), ball_term(1.0));
  const double a = p.f.alpha;
  const double L = p.f.L;
  const double q = a / L;

  dense_trs_result oracle = dense_trs_oracle(*p.quad, 1.0);
  const dvec& xstar = oracle.x;
  const double Fstar = oracle.f;

  ia_options opt;
  opt.iters = 13;
  opt.ls_tol = 1e-13;
  ia_result run = ia_strong_run(p, 0.15 * r.normal_vector(n), xstar, opt);
  REQUIRE(run.steps.size() == 13);

  const double phi0 = (run.steps[0].y - xstar).squaredNorm() +
                      2.0 * (run.steps[0].F_x - Fstar) / a;

  int attempted = 0, succeeded = 0;
  for (std::size_t j = 0; j + 1 < run.steps.size(); ++j) {
    const ia_record& cur = run.steps[j];
    const ia_record& nxt = run.steps[j + 1];

    double r1_sq = (cur.y - xstar).squaredNorm() + 2.0 * (cur.F_x - Fstar) / a;
    double r2_sq = cur.Gz_norm * cur.Gz_norm / (a * a);
    double C = std::max(2.0 * (nxt.F_x - Fstar) / a, 0.0);
    if (r2_sq <= 0.0) continue;

    prox_grad_result pg_z = prox_gradient(p, cur.z);
    dvec zz = cur.z - pg_z.G / a;

    // skip steps whose rounding leaves the preconditions marginal
    double gap = (cur.y - zz).norm();
    double ry = r1_sq - q * r2_sq - C;
    double rz = (1.0 - q) * r2_sq - C;
    if (ry < 0.0 || rz < 0.0) continue;
    if (gap < std::sqrt(r2_sq) * (1.0 + 1e-9)) continue;
    if (gap > (std::sqrt(ry) + std::sqrt(rz)) * (1.0 - 1e-9)) continue;

    ++attempted;
    ball out = gd_combine(zz, cur.y, r1_sq, r2_sq, q, C);
    double slack = 1e-8 * (1.0 + phi0);
    if ((out.center - xstar).squaredNorm() <= out.radius_sq + slack &&
        out.radius_sq <= (1.0 - std::sqrt(q)) * r1_sq - C + slack)
      ++succeeded;
  }
  CHECK(attempted >= 8);
  CHECK(succeeded == attempted);
}

TEST_CASE("the convex reference run keeps its potential and descends") {
  rng r(85);
  const Eigen::Index n = 12;
  dvec d(n);
  dvec b(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    d[i] = (i % 3 == 0) ? 0.0 : r.uniform(0.5, 6.0);
    b[i] = r.normal();
    if (d[i] == 0.0) b[i] *= 0.1;  // keep the flat coordinates bounded
  }
  const double w = 0.5;
  problem p = make_quadratic_diagonal(d, b, l1_term(w));
  REQUIRE(p.f.alpha == 0.0);
  const double L = p.f.L;

  dvec xstar = l1_minimizer_or_zero(d, b, w);
  double Fstar = eval_F(p, xstar);

  ia_options opt;
  opt.iters = 20;
  opt.ls_tol = 1e-13;
  ia_result run = ia_convex_run(p, r.normal_vector(n), xstar, opt);
  REQUIRE(run.steps.size() == 20);

  auto potential = [&](const ia_record& rec, int k) {
    return (rec.y - xstar).squaredNorm() +
           k * (k + 1.0) * (rec.F_x - Fstar) / (2.0 * L);
  };

  const double phi0 = potential(run.steps[0], 1);
  double phi = phi0;
  for (std::size_t j = 1; j < run.steps.size(); ++j) {
    const ia_record& rec = run.steps[j];
    int k = static_cast<int>(j) + 1;
    double weight = k * (k + 1.0) / (2.0 * L);
    double res = opt.ls_tol * L * (rec.y - rec.x).squaredNorm();
    double slack = 1e-9 * (1.0 + phi0) +
                   weight * (4.0 * res + 2e-12 * (1.0 + std::abs(Fstar)));
    double next = potential(rec, k);
    CHECK(next <= phi + slack);
    phi = next;

    // forward-backward values fall by the guaranteed decrement
    double drop = rec.Gx_norm * rec.Gx_norm / (2.0 * L);
    CHECK(rec.F_xbar <= run.steps[j - 1].F_xbar - drop +
                            1e-11 * (1.0 + std::abs(run.steps[j - 1].F_xbar)));

    // the set widens by at most the two mapping directions
    CHECK(rec.subspace_dim >= run.steps[j - 1].subspace_dim);
    CHECK(rec.subspace_dim <= run.steps[j - 1].subspace_dim + 2);
  }

  for (const ia_record& rec : run.steps)
    CHECK(rec.F_xbar <= rec.F_x -
                            rec.Gx_norm * rec.Gx_norm / (2.0 * L) +
                            1e-11 * (1.0 + std::abs(rec.F_x)));
}

TEST_CASE("the descent guarantee survives without convexity") {
  rng r(86);
  const Eigen::Index n = 10;
  dvec d(n);
  for (Eigen::Index i = 0; i < n; ++i) d[i] = r.uniform(0.5, 4.0);
  d[0] = -1.0;
  problem p = make_quadratic_diagonal(d, r.normal_vector(n), ball_term(1.0));
  REQUIRE(!p.f.convex);
  const double L = p.f.L;

  dense_trs_result oracle = dense_trs_oracle(*p.quad, 1.0);
  ia_options opt;
  opt.iters = 15;
  opt.ls_tol = 1e-12;
  ia_result run = ia_convex_run(p, 0.1 * r.normal_vector(n), oracle.x, opt);
  REQUIRE(run.steps.size() == 15);

  for (std::size_t j = 1; j < run.steps.size(); ++j) {
    double drop = run.steps[j].Gx_norm * run.steps[j].Gx_norm / (2.0 * L);
    CHECK(run.steps[j].F_xbar <=
          run.steps[j - 1].F_xbar - drop +
              1e-11 * (1.0 + std::abs(run.steps[j - 1].F_xbar)));
    CHECK(run.steps[j].F_xbar >= oracle.f - 1e-10 * (1.0 + std::abs(oracle.f)));
  }
}

TEST_CASE("the early-stop threshold truncates the run") {
  rng r(87);
  dvec d(6);
  for (int i = 0; i < 6; ++i) d[i] = r.uniform(1.0, 4.0);
  problem p = make_quadratic_diagonal(d, r.normal_vector(6), zero_term());
  dvec xstar = p.quad->b.cwiseQuotient(p.quad->diag);

  ia_options opt;
  opt.iters = 30;
  opt.g_stop = 1e-8;
  ia_result run = ia_strong_run(p, r.normal_vector(6), xstar, opt);
  REQUIRE(!run.steps.empty());
  CHECK(run.steps.size() < 30);
  CHECK(run.steps.back().Gx_norm <= 1e-8);
}

TEST_CASE("the strongly convex run refuses merely convex input") {
  dvec d(3);
  d << 0.0, 1.0, 2.0;
  problem p = make_quadratic_diagonal(d, dvec::Ones(3), zero_term());
  CHECK_THROWS_AS(ia_strong_run(p, dvec::Zero(3), dvec::Zero(3)), precondition_error);
}

}  // TEST_SUITE
