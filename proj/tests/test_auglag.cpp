#include <doctest.h>

#include <random>

#include "albo/auglag.hpp"
#include "albo/errors.hpp"

using namespace albo;

namespace {

Evaluation eval_of(double f, Vector c) {
  Evaluation e;
  e.f = f;
  e.c = std::move(c);
  return e;
}

}  // namespace

TEST_SUITE("auglag") {

TEST_CASE("value equals f when multipliers vanish and c <= 0") {
  const ALParams p = ALParams::initial(3);
  const Vector c{-0.1, 0.0, -7.0};
  const auto v = al_value(0.625, c, p, false);
  CHECK(v.value == 0.625);
  CHECK(v.linear == 0.0);
  CHECK(v.penalty == 0.0);
}

TEST_CASE("worked values with and without the max") {
  const ALParams p = ALParams::initial(2);
  const Vector c{0.2, -0.1};
  CHECK(al_value(1.0, c, p, false).value == doctest::Approx(1.04).epsilon(1e-15));
  CHECK(al_value(1.0, c, p, true).value == doctest::Approx(1.05).epsilon(1e-15));
  ALParams q = p;
  q.lambda = {0.5, 2.0};
  q.rho = 0.25;
  // 1 + (0.1 - 0.2) + 2 * 0.04
  CHECK(al_value(1.0, c, q, false).value == doctest::Approx(0.98).epsilon(1e-15));
}

TEST_CASE("multiplier update") {
  ALParams p = ALParams::initial(2);
  const auto q = update_multipliers(p, Vector{0.2, -0.3});
  CHECK(q.lambda == Vector{0.4, 0.0});
  CHECK(q.rho == p.rho);
  CHECK(update_multipliers(q, Vector{0.0, 0.0}).lambda == q.lambda);
  ALParams one{{1.0}, 1.0, 0};
  CHECK(update_multipliers(one, Vector{-5.0}).lambda == Vector{0.0});
  CHECK_THROWS_AS(update_multipliers(p, Vector{1.0}), InvalidArgument);
}

TEST_CASE("penalty update") {
  ALParams p = ALParams::initial(2);
  CHECK(update_penalty(p, Vector{0.1, -0.2}).rho == 0.25);
  CHECK(update_penalty(p, Vector{-0.1, -0.2}).rho == 0.5);
  CHECK(update_penalty(p, Vector{0.0, 0.0}).rho == 0.5);
  ALParams q = p;
  for (int j = 1; j <= 30; ++j) {
    q = update_penalty(q, Vector{1.0, -1.0});
    CHECK(q.rho == std::ldexp(0.5, -j));
  }
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS((ALParams{{-0.1}, 0.5, 0}.validate()), InvalidArgument);
  CHECK_THROWS_AS((ALParams{{0.1}, 0.0, 0}.validate()), InvalidArgument);
  CHECK_THROWS_AS(ALParams::initial(2, -1.0), InvalidArgument);
}

TEST_CASE("random update sequences keep lambda >= 0 and only halve rho") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> z(0.0, 2.0);
  for (int run = 0; run < 200; ++run) {
    ALParams p = ALParams::initial(3);
    for (int k = 0; k < 25; ++k) {
      Vector c{z(rng), z(rng), z(rng)};
      const double before = p.rho;
      p = update_penalty(update_multipliers(p, c), c);
      for (double l : p.lambda) CHECK(l >= 0.0);
      const bool infeasible = c[0] > 0 || c[1] > 0 || c[2] > 0;
      CHECK(p.rho == (infeasible ? before / 2.0 : before));
    }
  }
}

TEST_CASE("best value over a history") {
  const ALParams p = ALParams::initial(1);
  std::vector<Evaluation> one{eval_of(0.3, {0.4})};
  CHECK(best_al_value(one, p, false) == al_value(0.3, one[0].c, p, false).value);
  CHECK_THROWS_AS(best_al_value(std::vector<Evaluation>{}, p, false), InvalidArgument);

  for (double rho : {1e-3, 0.5, 1e3}) {
    ALParams q = p;
    q.rho = rho;
    std::vector<Evaluation> two{eval_of(1.0, {1.0}), eval_of(1.0, {-1.0})};
    CHECK(best_al_index(two, q, false) == 1);
  }
  std::vector<Evaluation> tie{eval_of(1.0, {-1.0}), eval_of(1.0, {-2.0})};
  CHECK(best_al_index(tie, p, false) == 0);
}

TEST_CASE("best value matches a brute-force scan") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int run = 0; run < 50; ++run) {
    ALParams p{{std::abs(u(rng)), std::abs(u(rng))}, 0.1 + std::abs(u(rng)), 0};
    std::vector<Evaluation> hist;
    for (int i = 0; i < 20; ++i) hist.push_back(eval_of(u(rng), {u(rng), u(rng)}));
    for (bool drop : {false, true}) {
      double best = INFINITY;
      std::size_t arg = 0;
      for (std::size_t i = 0; i < hist.size(); ++i) {
        double v = hist[i].f;
        for (int j = 0; j < 2; ++j) {
          const double h = drop ? hist[i].c[j] : std::max(0.0, hist[i].c[j]);
          v += p.lambda[j] * hist[i].c[j] + h * h / (2.0 * p.rho);
        }
        if (v < best) best = v, arg = i;
      }
      CHECK(best_al_value(hist, p, drop) == doctest::Approx(best).epsilon(1e-14));
      CHECK(best_al_index(hist, p, drop) == arg);
    }
  }
}

}  // TEST_SUITE
