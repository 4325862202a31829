#include <doctest.h>

#include "compass/problem.hpp"
#include "compass/problem_io.hpp"

#include <cmath>
#include <limits>

using namespace compass;

TEST_SUITE("problem") {

TEST_CASE("constants come from the eigenvalue range") {
  dvec d(3);
  d << 2.0, 0.5, 10.0;
  problem p = make_quadratic_diagonal(d, dvec::Zero(3), zero_term());
  CHECK(p.f.L == 10.0);
  CHECK(p.f.alpha == 0.5);
  CHECK(p.f.convex);
  CHECK(p.quad->eigenvalues[0] == 0.5);
  CHECK(p.quad->eigenvalues[2] == 10.0);

  dvec dn(3);
  dn << -1.0, 0.5, 4.0;
  problem pn = make_quadratic_diagonal(dn, dvec::Zero(3), zero_term());
  CHECK(pn.f.L == 4.0);
  CHECK(pn.f.alpha == 0.0);
  CHECK(!pn.f.convex);

  dvec dz(2);
  dz << 0.0, 3.0;
  problem pz = make_quadratic_diagonal(dz, dvec::Zero(2), zero_term());
  CHECK(pz.f.alpha == 0.0);
  CHECK(pz.f.convex);
}

TEST_CASE("asymmetric input is rejected") {
  dmat A(2, 2);
  A << 1.0, 0.5, 0.2, 1.0;
  CHECK_THROWS_AS(make_quadratic(A, dvec::Zero(2), zero_term()), precondition_error);
}

TEST_CASE("objective adds the extra term as an extended real") {
  dvec d(2);
  d << 1.0, 2.0;
  dvec b(2);
  b << 1.0, -1.0;
  dvec x(2);
  x << 3.0, 0.5;

  problem pz = make_quadratic_diagonal(d, b, zero_term());
  double fx = 0.5 * (1.0 * 9.0 + 2.0 * 0.25) - (3.0 - 0.5);
  CHECK(eval_F(pz, x) == doctest::Approx(fx).epsilon(1e-14));

  problem pl = make_quadratic_diagonal(d, b, l1_term(0.3));
  CHECK(eval_F(pl, x) == doctest::Approx(fx + 0.3 * 3.5).epsilon(1e-14));

  problem pb = make_quadratic_diagonal(d, b, ball_term(1.0));
  CHECK(std::isinf(eval_F(pb, x)));
  dvec inside = dvec::Zero(2);
  CHECK(eval_F(pb, inside) == 0.0);

  problem pbox = make_quadratic_diagonal(d, b, box_term(dvec::Constant(2, -1.0),
                                                        dvec::Constant(2, 1.0)));
  CHECK(std::isinf(eval_F(pbox, x)));
}

TEST_CASE("ball feasibility tolerates projection rounding") {
  simple_term ball = ball_term(2.0);
  dvec x(1);
  x << 2.0 * (1.0 + 1e-13);
  CHECK(ball.feasible(x));
  x << 2.5;
  CHECK(!ball.feasible(x));
}

TEST_CASE("diagonal problems round-trip through JSON") {
  dvec d(3);
  d << 1.0, 4.0, 9.0;
  dvec b(3);
  b << 0.25, -1.5, 3.0;
  problem p = make_quadratic_diagonal(d, b, l1_term(0.7));
  nlohmann::json gen = {{"kind", "quadratic"}, {"n", 3},        {"seed", 42},
                        {"spectrum", "x"},     {"psi", "l1:0.7"}, {"dense", false}};
  nlohmann::json j = problem_to_json(p, gen);

  loaded_problem back = problem_from_json(j);
  REQUIRE(back.p.quad);
  CHECK(back.p.quad->diagonal);
  CHECK((back.p.quad->diag - d).norm() == 0.0);
  CHECK((back.p.quad->b - b).norm() == 0.0);
  CHECK(back.p.psi.kind == psi_kind::l1);
  CHECK(back.p.psi.weight == 0.7);
  CHECK(back.generator == gen);
  CHECK(problem_to_json(back.p, back.generator) == j);
}

TEST_CASE("dense problems round-trip through JSON") {
  dmat A(2, 2);
  A << 2.0, 0.5, 0.5, 3.0;
  dvec b(2);
  b << 1.0, 2.0;
  problem p = make_quadratic(A, b, ball_term(1.5));
  nlohmann::json j = problem_to_json(p);
  loaded_problem back = problem_from_json(j);
  REQUIRE(back.p.quad);
  CHECK(!back.p.quad->diagonal);
  CHECK((back.p.quad->A - A).norm() == 0.0);
  CHECK(back.p.psi.kind == psi_kind::ball);
  CHECK(back.p.psi.delta == 1.5);
  CHECK(back.generator.is_null());
}

TEST_CASE("malformed problem JSON is rejected") {
  nlohmann::json good = {{"kind", "quadratic"},
                         {"matrix", {{"diagonal", {1.0, 2.0}}}},
                         {"b", {1.0, 1.0}},
                         {"psi", {{"variant", "zero"}}}};
  CHECK_NOTHROW(problem_from_json(good));

  nlohmann::json bad = good;
  bad["kind"] = "cubic";
  CHECK_THROWS_AS(problem_from_json(bad), precondition_error);

  bad = good;
  bad["psi"] = {{"variant", "simplex"}};
  CHECK_THROWS_AS(problem_from_json(bad), precondition_error);

  bad = good;
  bad["matrix"] = {{"dense", {{1.0, 0.0}, {0.0}}}};
  CHECK_THROWS_AS(problem_from_json(bad), precondition_error);

  bad = good;
  bad["b"] = {1.0, "nope"};
  CHECK_THROWS_AS(problem_from_json(bad), precondition_error);
}

TEST_CASE("custom oracles validate their constants") {
  smooth_oracle f;
  f.value = [](const dvec& x) { return 0.5 * x.squaredNorm(); };
  f.gradient = [](const dvec& x) { return x; };
  f.L = 1.0;
  f.alpha = 1.0;
  f.dim = 4;
  CHECK_NOTHROW(make_custom(f, zero_term()));

  smooth_oracle bad = f;
  bad.alpha = 2.0;  // exceeds L
  CHECK_THROWS_AS(make_custom(bad, zero_term()), precondition_error);
  bad = f;
  bad.L = 0.0;
  CHECK_THROWS_AS(make_custom(bad, zero_term()), precondition_error);
}

}  // TEST_SUITE
