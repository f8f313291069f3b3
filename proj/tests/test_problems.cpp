#include <doctest.h>

#include <cmath>
#include <numbers>

#include "albo/errors.hpp"
#include "albo/optimizer.hpp"
#include "albo/problems.hpp"

using namespace albo;

namespace {

bool toy_valid(double x1, double x2) {
  const double x[] = {x1, x2};
  return toy::constraint1(x) <= 0.0 && toy::constraint2(x) <= 0.0;
}

Problem toy_over_pipe() {
  ExternalOptions opts;
  opts.known_objective = Objective(toy::objective);
  return external_blackbox(ALBO_TOY_BLACKBOX, 2, 2, opts);
}

}  // namespace

TEST_SUITE("problems") {

TEST_CASE("toy formulas at the corners") {
  Problem p = toy_problem();
  const double x0[] = {0.0, 0.0};
  const auto e0 = p.evaluate(x0);
  CHECK(e0.f == 0.0);
  CHECK(e0.c[0] == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(e0.c[1] == -1.5);
  CHECK_FALSE(e0.valid());

  const double x1[] = {1.0, 1.0};
  const auto e1 = p.evaluate(x1);
  CHECK(e1.f == 2.0);
  CHECK(e1.c[0] == doctest::Approx(-1.5).epsilon(1e-12));
  CHECK(e1.c[1] == 0.5);
  CHECK_FALSE(e1.valid());
  CHECK(e1.index == 2);
  CHECK(p.evaluations() == 2);
}

TEST_CASE("direct arithmetic on the constraint formulas") {
  for (double a : {0.1, 0.37, 0.8}) {
    for (double b : {0.05, 0.5, 0.93}) {
      const double x[] = {a, b};
      const double c1 = 1.5 - a - 2.0 * b - 0.5 * std::sin(2.0 * std::numbers::pi * (a * a - 2.0 * b));
      CHECK(toy::constraint1(x) == doctest::Approx(c1).epsilon(1e-14));
      CHECK(toy::constraint2(x) == doctest::Approx(a * a + b * b - 1.5).epsilon(1e-14));
      CHECK(toy::objective(x) == a + b);
    }
  }
}

TEST_CASE("the three local minimizers") {
  // x^A is the global one at f ~ 0.5998 on the c1 boundary.
  const double xa[] = {0.1954, 0.4044};
  CHECK(toy::objective(xa) == doctest::Approx(0.5998));
  CHECK(std::abs(toy::constraint1(xa)) < 1e-3);
  CHECK(toy::constraint2(xa) < 0.0);
  const double xb[] = {0.7197, 0.1411};
  CHECK(toy::objective(xb) == doctest::Approx(0.8608).epsilon(1e-4));
  CHECK(std::abs(toy::constraint1(xb)) < 1e-3);
  const double xc[] = {0.0, 0.75};
  CHECK(toy::objective(xc) == 0.75);
  CHECK(std::abs(toy::constraint1(xc)) < 1e-12);

  // Each is a local minimum: no valid point nearby does much better.
  for (const auto* xm : {xa, xb, xc}) {
    const double fm = toy::objective(std::span<const double>(xm, 2));
    for (int i = -50; i <= 50; ++i)
      for (int j = -50; j <= 50; ++j) {
        const double a = xm[0] + 0.001 * i, b = xm[1] + 0.001 * j;
        if (a < 0 || a > 1 || b < 0 || b > 1 || !toy_valid(a, b)) continue;
        CHECK(a + b >= fm - 2e-3);
      }
  }
}

TEST_CASE("dense grid never beats the global minimum") {
  double best = INFINITY;
  for (int i = 0; i < 200; ++i)
    for (int j = 0; j < 200; ++j) {
      const double a = i / 199.0, b = j / 199.0;
      if (toy_valid(a, b)) best = std::min(best, a + b);
    }
  CHECK(best >= 0.5998 - 1e-4);
  CHECK(best <= 0.5998 + 0.01);
}

TEST_CASE("out-of-bounds input leaves the counter alone") {
  Problem p = toy_problem();
  const double bad[] = {1.2, 0.5};
  CHECK_THROWS_AS(p.evaluate(bad), InvalidArgument);
  const double wrong_dim[] = {0.5};
  CHECK_THROWS_AS(p.evaluate(wrong_dim), InvalidArgument);
  CHECK(p.evaluations() == 0);
  const double ok[] = {0.5, 0.5};
  p.evaluate(ok);
  CHECK(p.evaluations() == 1);
  CHECK(p.log().front().index == 1);
}

TEST_CASE("hyperrectangle maps to and from the unit cube") {
  Hyperrectangle b{{-1.0, 2.0}, {3.0, 2.5}};
  REQUIRE_NOTHROW(b.validate());
  const double x[] = {0.0, 2.25};
  const auto u = b.to_unit(x);
  CHECK(u[0] == doctest::Approx(0.25));
  CHECK(u[1] == doctest::Approx(0.5));
  const auto back = b.from_unit(u);
  CHECK(back[0] == doctest::Approx(0.0));
  CHECK(back[1] == doctest::Approx(2.25));
  CHECK_THROWS_AS((Hyperrectangle{{0.0}, {0.0}}.validate()), InvalidArgument);
}

TEST_CASE("number formatting round-trips") {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0}) {
    const auto back = parse_double(format_double(v));
    REQUIRE(back);
    CHECK(*back == v);
  }
  CHECK_FALSE(parse_double("1.5x"));
  CHECK_FALSE(parse_double(""));
  CHECK(std::isinf(*parse_double("inf")));
}

TEST_CASE("external child echoing zeros") {
  Problem p = external_blackbox("while read line; do echo 0.0 0.0 0.0; done", 2, 2);
  const double x[] = {0.3, 0.7};
  const auto e = p.evaluate(x);
  CHECK(e.f == 0.0);
  CHECK(e.c == Vector{0.0, 0.0});
  CHECK(e.valid());
  CHECK(p.evaluate(x).index == 2);
}

TEST_CASE("external child with the wrong arity") {
  Problem p = external_blackbox("while read line; do echo 0.0 0.0; done", 2, 2);
  const double x[] = {0.3, 0.7};
  try {
    p.evaluate(x);
    FAIL("expected a protocol error");
  } catch (const BlackboxError& e) {
    CHECK(e.raw_output().find("0.0 0.0") != std::string::npos);
  }
  CHECK(p.evaluations() == 0);
}

TEST_CASE("external child misbehaving") {
  const double x[] = {0.3, 0.7};
  SUBCASE("non-numeric output") {
    Problem p = external_blackbox("while read line; do echo 1 abc 2; done", 2, 2);
    CHECK_THROWS_AS(p.evaluate(x), BlackboxError);
  }
  SUBCASE("non-finite output") {
    Problem p = external_blackbox("while read line; do echo 1 nan 2; done", 2, 2);
    CHECK_THROWS_AS(p.evaluate(x), BlackboxError);
  }
  SUBCASE("child exits") {
    Problem p = external_blackbox("exit 0", 2, 2);
    CHECK_THROWS_AS(p.evaluate(x), BlackboxError);
  }
  SUBCASE("child hangs") {
    ExternalOptions opts;
    opts.timeout = std::chrono::milliseconds(200);
    Problem p = external_blackbox("sleep 5", 2, 2, opts);
    CHECK_THROWS_AS(p.evaluate(x), BlackboxError);
  }
}

TEST_CASE("external objective from the child or known") {
  Problem from_child = external_blackbox(ALBO_TOY_BLACKBOX, 2, 2);
  CHECK_FALSE(from_child.objective_known());
  Problem local = toy_problem();
  const double x[] = {0.123456789, 0.987654321};
  const auto a = from_child.evaluate(x);
  const auto b = local.evaluate(x);
  CHECK(a.f == b.f);
  CHECK(a.c == b.c);
}

TEST_CASE("toy over a pipe reproduces the in-process trace") {
  SearchConfig cfg;
  cfg.budget = 30;
  cfg.seed = 11;
  Problem local = toy_problem();
  Problem piped = toy_over_pipe();
  const auto ta = optim_auglag(local, cfg);
  const auto tb = optim_auglag(piped, cfg);
  REQUIRE(ta.rows.size() == tb.rows.size());
  for (std::size_t i = 0; i < ta.rows.size(); ++i) {
    CHECK(ta.rows[i].x == tb.rows[i].x);
    CHECK(ta.rows[i].f == tb.rows[i].f);
    CHECK(ta.rows[i].c == tb.rows[i].c);
    CHECK(ta.rows[i].decision == tb.rows[i].decision);
  }
}

}  // TEST_SUITE
