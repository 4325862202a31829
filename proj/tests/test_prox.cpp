#include <doctest.h>

#include "compass/prox.hpp"
#include "compass/trs.hpp"

#include <cmath>

using namespace compass;

namespace {

double prox_objective(const simple_term& psi, const dvec& u, const dvec& x, double t) {
  return 0.5 * (u - x).squaredNorm() + t * psi.value(u);
}

simple_term variant(int which, Eigen::Index n) {
  switch (which) {
    case 0:
      return zero_term();
    case 1:
      return ball_term(0.8);
    case 2:
      return box_term(dvec::Constant(n, -0.4), dvec::Constant(n, 0.9));
    default:
      return l1_term(0.3);
  }
}

}  // namespace

TEST_SUITE("prox") {

TEST_CASE("each variant matches its closed form") {
  rng r(21);
  const Eigen::Index n = 6;
  dvec x = 2.0 * r.normal_vector(n);
  const double t = 0.7;

  CHECK((prox(zero_term(), x, t) - x).norm() == 0.0);

  dvec pb = prox(ball_term(0.8), x, t);
  if (x.norm() <= 0.8) {
    CHECK((pb - x).norm() == 0.0);
  } else {
    dvec want = x * (0.8 / x.norm());
    CHECK((pb - want).norm() <= 1e-15 * want.norm());
  }

  simple_term box = variant(2, n);
  dvec pbox = prox(box, x, t);
  for (Eigen::Index i = 0; i < n; ++i)
    CHECK(pbox[i] == std::min(std::max(x[i], -0.4), 0.9));

  simple_term l1 = l1_term(0.3);
  dvec pl = prox(l1, x, t);
  const double w = t * 0.3;
  for (Eigen::Index i = 0; i < n; ++i) {
    double want = x[i] > w ? x[i] - w : (x[i] < -w ? x[i] + w : 0.0);
    CHECK(pl[i] == want);
  }
}

TEST_CASE("the prox point beats sampled candidates") {
  rng r(22);
  const Eigen::Index n = 5;
  const double t = 0.5;
  for (int which = 0; which < 4; ++which) {
    simple_term psi = variant(which, n);
    for (int rep = 0; rep < 20; ++rep) {
      dvec x = 1.5 * r.normal_vector(n);
      dvec u = prox(psi, x, t);
      double at_u = prox_objective(psi, u, x, t);
      for (int s = 0; s < 50; ++s) {
        dvec cand = u + 0.5 * r.normal_vector(n);
        if (psi.kind == psi_kind::ball || psi.kind == psi_kind::box)
          cand = prox(psi, cand, t);  // compare within the feasible set
        double at_cand = prox_objective(psi, cand, x, t);
        CHECK(at_u <= at_cand + 1e-12 * (1.0 + std::abs(at_cand)));
      }
    }
  }
}

TEST_CASE("prox maps are nonexpansive") {
  rng r(23);
  const Eigen::Index n = 8;
  const double t = 1.3;
  for (int which = 0; which < 4; ++which) {
    simple_term psi = variant(which, n);
    for (int rep = 0; rep < 250; ++rep) {
      dvec x = 2.0 * r.normal_vector(n);
      dvec y = 2.0 * r.normal_vector(n);
      double lhs = (prox(psi, x, t) - prox(psi, y, t)).norm();
      double rhs = (x - y).norm();
      CHECK(lhs <= rhs * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("forward_backward publishes consistent pieces") {
  rng r(24);
  const Eigen::Index n = 7;
  dvec d(n);
  for (Eigen::Index i = 0; i < n; ++i) d[i] = 1.0 + r.uniform();
  problem p = make_quadratic_diagonal(d, r.normal_vector(n), l1_term(0.2));

  dvec x = r.normal_vector(n);
  const double t = 0.4;
  prox_grad_result pg = forward_backward(p, x, t);
  dvec xbar = prox(p.psi, dvec(x - t * p.f.gradient(x)), t);
  CHECK((pg.xbar - xbar).norm() == 0.0);
  CHECK((pg.G - (x - xbar) / t).norm() == 0.0);
  CHECK(pg.Gnorm == pg.G.norm());
  CHECK(pg.t == t);
}

TEST_CASE("descent holds at the canonical stepsize") {
  rng r(25);
  const Eigen::Index n = 10;
  dvec d(n);
  for (Eigen::Index i = 0; i < n; ++i) d[i] = r.uniform(0.5, 6.0);
  d[0] = -1.0;  // nonconvex curvature is fine for this inequality
  for (int which = 0; which < 4; ++which) {
    problem p = make_quadratic_diagonal(d, r.normal_vector(n), variant(which, n));
    for (int rep = 0; rep < 25; ++rep) {
      dvec x = r.normal_vector(n);
      if (p.psi.kind == psi_kind::ball || p.psi.kind == psi_kind::box)
        x = prox(p.psi, x, 1.0);  // the bound needs a feasible start
      descent_report rep_ = descent_check(p, x);
      CHECK(rep_.ok);
      CHECK(rep_.lhs <= rep_.rhs + 1e-10 * (1.0 + std::abs(rep_.rhs)));
    }
  }
}

TEST_CASE("gradient mapping vanishes at the constrained optimum") {
  rng r(26);
  const Eigen::Index n = 12;
  dvec d(n);
  for (Eigen::Index i = 0; i < n; ++i) d[i] = r.uniform(0.5, 8.0);
  dvec b = r.normal_vector(n);
  problem p = make_quadratic_diagonal(d, b, ball_term(0.3));

  dense_trs_result oracle = dense_trs_oracle(*p.quad, 0.3);
  CHECK(stationarity_bound(p, oracle.x) <= 1e-9);
}

TEST_CASE("stepsize must be positive") {
  dvec x = dvec::Ones(3);
  CHECK_THROWS_AS(prox(l1_term(1.0), x, 0.0), precondition_error);
  CHECK_THROWS_AS(prox(l1_term(1.0), x, -1.0), precondition_error);
}

}  // TEST_SUITE
