#include <doctest.h>

#include <cmath>
#include <numbers>

#include "albo/comparators.hpp"
#include "albo/errors.hpp"

using namespace albo;

TEST_SUITE("comparators") {

TEST_CASE("annealing spends exactly the budget") {
  for (std::size_t budget : {1u, 7u, 100u}) {
    Problem p = toy_problem();
    SannConfig cfg;
    cfg.budget = budget;
    cfg.seed = 3;
    const auto t = run_sann(p, cfg);
    CHECK(t.rows.size() == budget);
    CHECK(p.evaluations() == budget);  // calibration runs elsewhere
    for (const auto& r : t.rows) {
      CHECK(r.decision == "SANN");
      CHECK(std::isnan(r.rho));
      CHECK(std::isnan(r.lambda[0]));
    }
  }
}

TEST_CASE("default calibration equalizes the spread of both parts") {
  Problem p = toy_problem();
  SannConfig cfg;
  cfg.budget = 5;
  SannDiagnostics diag;
  run_sann(p, cfg, &diag);
  CHECK(diag.penalty_weight > 0.0);
  CHECK(diag.objective_scale > 0.0);
  // f = x1 + x2 on the unit square has sd sqrt(1/6).
  CHECK(diag.objective_scale == doctest::Approx(std::sqrt(1.0 / 6.0)).epsilon(0.15));
}

TEST_CASE("zero temperature never accepts an uphill move") {
  Problem p = toy_problem();
  SannConfig cfg;
  cfg.initial_temperature = 1e-12;
  cfg.budget = 200;
  cfg.seed = 8;
  SannDiagnostics diag;
  run_sann(p, cfg, &diag);
  REQUIRE(diag.state.size() == 200);
  for (std::size_t i = 1; i < diag.state.size(); ++i) {
    CHECK(diag.state[i] <= diag.state[i - 1]);
    if (diag.accepted[i]) CHECK(diag.composite[i] <= diag.state[i - 1]);
  }
}

TEST_CASE("temperature follows the logarithmic schedule") {
  Problem p = toy_problem();
  SannConfig cfg;
  cfg.budget = 60;
  cfg.seed = 2;
  SannDiagnostics diag;
  run_sann(p, cfg, &diag);
  for (double t : diag.temperature) CHECK(t <= cfg.initial_temperature);
  for (std::size_t i = 1; i < diag.temperature.size(); ++i)
    CHECK(diag.temperature[i] <= diag.temperature[i - 1]);
  // Each stage s starts at clock value 10 s + 1; out-of-box proposals also
  // advance the clock, so the last of 60 evaluations sits in stage >= 5.
  const double e = std::numbers::e;
  for (std::size_t i = 1; i < diag.temperature.size(); ++i) {
    const double stage = (std::exp(cfg.initial_temperature / diag.temperature[i]) - e) / 10.0;
    CHECK(std::abs(stage - std::round(stage)) < 1e-6);
  }
  CHECK(diag.temperature.back() <= cfg.initial_temperature / std::log(51.0 + e - 1.0) + 1e-12);
}

TEST_CASE("zero penalty weight ignores the constraints") {
  Problem p = toy_problem();
  SannConfig cfg;
  cfg.penalty_weight = 0.0;
  cfg.objective_scale = 2.0;
  cfg.budget = 40;
  SannDiagnostics diag;
  const auto t = run_sann(p, cfg, &diag);
  for (std::size_t i = 0; i < t.rows.size(); ++i)
    CHECK(diag.composite[i] == doctest::Approx(t.rows[i].f / 2.0).epsilon(1e-15));
  const double c[] = {3.0, -4.0};
  CHECK(sann_composite(1.0, c, 0.5, 2.0) == doctest::Approx((1.0 + 0.5 * 7.0) / 2.0));
}

TEST_CASE("annealing is deterministic per seed") {
  SannConfig cfg;
  cfg.budget = 50;
  cfg.seed = 77;
  Problem a = toy_problem(), b = toy_problem();
  const auto ta = run_sann(a, cfg), tb = run_sann(b, cfg);
  for (std::size_t i = 0; i < 50; ++i) CHECK(ta.rows[i].x == tb.rows[i].x);
}

TEST_CASE("bad annealing settings") {
  Problem p = toy_problem();
  SannConfig cfg;
  cfg.initial_temperature = 0.0;
  CHECK_THROWS_AS(run_sann(p, cfg), InvalidArgument);
  cfg = {};
  cfg.budget = 0;
  CHECK_THROWS_AS(run_sann(p, cfg), InvalidArgument);
}

TEST_CASE("random objective-improving search") {
  Problem p = toy_problem();
  const auto t = run_oic_random(p, OicRandomConfig{100, 5});
  REQUIRE(t.rows.size() == 100);
  double fstar = INFINITY;
  double last_best = INFINITY;
  for (const auto& r : t.rows) {
    CHECK(r.decision == "OIC");
    if (std::isfinite(fstar)) CHECK(r.f < fstar);
    if (r.valid) fstar = std::min(fstar, r.f);
    if (r.best_valid_f != last_best) {
      CHECK(r.best_valid_f < last_best);
      last_best = r.best_valid_f;
    }
  }
  CHECK(std::isfinite(fstar));
}

TEST_CASE("random search after a valid point at 0.8") {
  // Only the first answer is valid; afterwards everything must beat 0.8.
  Problem p = external_blackbox(
      "i=0; while read l; do i=$((i+1)); if [ $i -eq 1 ]; then echo 0 -1; else echo 0 1; fi; done", 2, 1,
      ExternalOptions{std::nullopt, Objective([](std::span<const double> x) { return x[0] + x[1]; }),
                      std::chrono::milliseconds(5000)});
  const auto t = run_oic_random(p, OicRandomConfig{30, 1});
  const double f1 = t.rows[0].f;
  for (std::size_t i = 1; i < t.rows.size(); ++i) CHECK(t.rows[i].f < f1);
}

TEST_CASE("random search needs a known objective") {
  Problem p = external_blackbox("while read l; do echo 0 0; done", 2, 1);
  CHECK_THROWS_AS(run_oic_random(p, OicRandomConfig{10, 1}), InvalidArgument);
}

}  // TEST_SUITE
