#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "albo/acquisition.hpp"
#include "albo/errors.hpp"
#include "albo/normal.hpp"
#include "support.hpp"

using namespace albo;
using namespace albo::acq;

namespace {

// A context whose j-th constraint surrogate predicts exactly N(mu_j, sd_j^2)
// at x = 1 and N(mu_j, 0) at x = 0: one design point at 0, tiny lengthscale.
AcquisitionContext exact_context(const Vector& mu, const Vector& sd, ALParams al, double y_min,
                                 bool drop_max, std::size_t samples, std::uint64_t seed) {
  AcquisitionContext ctx;
  for (std::size_t j = 0; j < mu.size(); ++j) {
    gp::DesignSet d(1);
    const double x0[] = {0.0};
    d.add(x0, mu[j]);
    ctx.constraints.push_back(gp::fit_gp(d, gp::GPHyper{0.01, 0.0, sd[j] > 0 ? sd[j] * sd[j] : 1.0}));
  }
  ctx.bounds = Hyperrectangle::unit(1);
  ctx.al = std::move(al);
  ctx.y_min = y_min;
  ctx.drop_max = drop_max;
  ctx.samples = samples;
  ctx.rng_seed = seed;
  return ctx;
}

std::optional<Objective> constant_f(double f) {
  return Objective([f](std::span<const double>) { return f; });
}

const double kFar[] = {1.0};
const double kNear[] = {0.0};

}  // namespace

TEST_SUITE("acquisition") {

TEST_CASE("exact context reproduces the requested moments") {
  const auto ctx = exact_context({0.3, -1.2}, {0.7, 2.0}, ALParams::initial(2), 0.0, false, 10, 1);
  const auto p = predict_point(kFar, ctx, constant_f(0.25));
  CHECK(p.objective_mean == 0.25);
  CHECK(p.objective_sd == 0.0);
  CHECK(p.constraint_mean[0] == doctest::Approx(0.3).epsilon(1e-14));
  CHECK(p.constraint_sd[1] == doctest::Approx(2.0).epsilon(1e-14));
  const auto q = predict_point(kNear, ctx, constant_f(0.25));
  CHECK(q.constraint_sd[0] == 0.0);
}

TEST_CASE("closed-form EI") {
  CHECK(ei_gaussian(0.0, 1.0, 0.0) == doctest::Approx(0.3989423).epsilon(1e-7));
  CHECK(ei_gaussian(5.0, 0.0, 3.0) == 0.0);
  CHECK(ei_gaussian(1.0, 0.0, 3.0) == 2.0);
  const double exact = normal_cdf(1.0) + normal_pdf(1.0);
  CHECK(ei_gaussian(0.0, 1.0, 1.0) == doctest::Approx(1.08332).epsilon(1e-5));
  CHECK(ei_gaussian(0.0, 1.0, 1.0) == doctest::Approx(exact).epsilon(1e-14));
  const auto mc = support::monte_carlo(10'000'000, 3, [](double z) { return std::max(0.0, 1.0 - z); });
  CHECK(std::abs(mc.mean - ei_gaussian(0.0, 1.0, 1.0)) <= 3.0 * mc.se);
  // Far tails stay finite and nonnegative.
  CHECK(ei_gaussian(40.0, 1.0, 0.0) >= 0.0);
  CHECK(ei_gaussian(-40.0, 1.0, 0.0) == doctest::Approx(40.0));
}

TEST_CASE("expected squared hinge") {
  CHECK(expected_sq_hinge(0.0, 1.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(expected_sq_hinge(-10.0, 1.0) < 1e-20);
  CHECK(expected_sq_hinge(0.8, 0.0) == doctest::Approx(0.64));
  CHECK(expected_sq_hinge(-0.8, 0.0) == 0.0);
  const auto mc = support::monte_carlo(1'000'000, 4, [](double z) {
    const double y = std::max(0.0, 0.7 + 0.4 * z);
    return y * y;
  });
  CHECK(std::abs(mc.mean - expected_sq_hinge(0.7, 0.4)) <= 3.0 * mc.se);
}

TEST_CASE("EY reduces to the AL value for a deterministic surrogate") {
  ALParams al{{0.7}, 0.3, 0};
  const auto ctx = exact_context({0.4}, {0.0}, al, 0.0, false, 10, 1);
  const double c[] = {0.4};
  CHECK(ey_composite(kNear, ctx, constant_f(0.2)) == doctest::Approx(al_value(0.2, c, al, false).value).epsilon(1e-14));
  const auto neg = exact_context({-0.4}, {0.0}, al, 0.0, true, 10, 1);
  const double cn[] = {-0.4};
  CHECK(ey_composite(kNear, neg, constant_f(0.2)) == doctest::Approx(al_value(0.2, cn, al, true).value).epsilon(1e-14));
}

TEST_CASE("EY tends to f when the penalty vanishes") {
  ALParams al{{0.0, 0.0}, 1e12, 0};
  const auto ctx = exact_context({1.0, -0.3}, {2.0, 0.5}, al, 0.0, false, 10, 1);
  CHECK(ey_composite(kFar, ctx, constant_f(0.42)) == doctest::Approx(0.42).epsilon(1e-10));
}

TEST_CASE("EY matches a Monte Carlo mean of the composite") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int cell = 0; cell < 20; ++cell) {
    const double lam = 2.0 * u(rng), rho = 0.05 + u(rng);
    const double mu = 3.0 * u(rng) - 1.5, sd = 0.05 + 1.5 * u(rng);
    for (bool drop : {false, true}) {
      const auto ctx = exact_context({mu}, {sd}, ALParams{{lam}, rho, 0}, 0.0, drop, 10, 1);
      const double ey = ey_composite(kFar, ctx, constant_f(0.5));
      const auto mc = support::monte_carlo(200'000, 100 + cell, [&](double z) {
        const double y = mu + sd * z;
        const double h = drop ? y : std::max(0.0, y);
        return 0.5 + lam * y + h * h / (2.0 * rho);
      });
      CHECK(std::abs(mc.mean - ey) <= 3.0 * mc.se);
    }
  }
}

TEST_CASE("Monte Carlo EI preconditions and degenerate sampling") {
  auto ctx = exact_context({0.2, -0.5}, {0.0, 0.0}, ALParams{{0.3, 0.1}, 0.25, 0}, 1.5, false, 50, 3);
  const double c[] = {0.2, -0.5};
  const auto s = mc_ei(kNear, ctx, constant_f(0.6));
  CHECK(s.value == doctest::Approx(std::max(0.0, 1.5 - al_value(0.6, c, ctx.al, false).value)).epsilon(1e-14));
  CHECK(s.std_error == 0.0);
  ctx.y_min = -std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(mc_ei(kNear, ctx, constant_f(0.6)), InvalidArgument);
  ctx.y_min = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(mc_ei(kNear, ctx, constant_f(0.6)), InvalidArgument);
}

TEST_CASE("Monte Carlo EI is reproducible per seed and monotone in y_min") {
  auto ctx = exact_context({0.1, -0.2}, {0.6, 0.9}, ALParams{{0.5, 0.0}, 0.5, 0}, 0.8, false, 500, 42);
  const auto a = mc_ei(kFar, ctx, constant_f(0.3));
  const auto b = mc_ei(kFar, ctx, constant_f(0.3));
  CHECK(a.value == b.value);
  CHECK(a.std_error == b.std_error);
  ctx.rng_seed = 43;
  CHECK(mc_ei(kFar, ctx, constant_f(0.3)).value != a.value);

  const auto draws = StandardDraws::generate(2, 500, false, 7);
  PointPrediction p{0.3, 0.0, {0.1, -0.2}, {0.6, 0.9}};
  double prev = -1.0;
  for (double y = -1.0; y <= 3.0; y += 0.05) {
    const double v = mc_improvement(p, ctx.al, false, y, draws).value;
    CHECK(v >= prev);
    prev = v;
  }
}

TEST_CASE("common random numbers are shared and seeded") {
  const auto a = StandardDraws::generate(3, 100, true, 5);
  const auto b = StandardDraws::generate(3, 100, true, 5);
  CHECK(a.constraint_z == b.constraint_z);
  CHECK(a.objective_z == b.objective_z);
  CHECK(a.constraint_z.size() == 300);
  CHECK(a.objective_z.size() == 100);
  CHECK(StandardDraws::generate(3, 100, false, 5).objective_z.empty());
}

TEST_CASE("analytic no-max EI special cases") {
  CHECK(analytic_ei_nomax(1.0, 0.0, 1.0, ALParams{{0.0}, 0.5, 0}, 0.0) == 0.0);
  CHECK(analytic_ei_nomax(0.4, 0.3, 1.0, ALParams{{0.0}, 0.5, 0}, 0.4) == 0.0);
  CHECK_THROWS_AS(analytic_ei_nomax(0.0, 0.0, 1.0, ALParams{{0.0, 1.0}, 0.5, 0}, 0.0), InvalidArgument);
  // sigma = 0 is the deterministic improvement.
  CHECK(analytic_ei_nomax(0.0, -0.2, 0.0, ALParams{{1.0}, 1.0, 0}, 0.5) == doctest::Approx(0.5 - (-0.2 + 0.02)));
}

TEST_CASE("analytic no-max EI against Monte Carlo") {
  const double exact = analytic_ei_nomax(0.0, 0.0, 1.0, ALParams{{1.0}, 1.0, 0}, 0.5);
  const auto mc = support::monte_carlo(1'000'000, 8, [](double z) {
    return std::max(0.0, 0.5 - (z + z * z / 2.0));
  });
  CHECK(exact > 0.0);
  CHECK(std::abs(mc.mean - exact) <= 3.0 * mc.se);
}

TEST_CASE("Monte Carlo EI with the max dropped agrees with the closed form") {
  const ALParams al{{0.6}, 0.4, 0};
  const double f = 0.3, y_min = 0.45;
  int zeros = 0;
  for (double mu : {-1.0, -0.4, 0.0, 0.5, 1.2}) {
    for (double sd : {0.05, 0.3, 0.7, 1.2, 2.0}) {
      const auto ctx = exact_context({mu}, {sd}, al, y_min, true, 10'000, 17);
      const auto mc = mc_ei(kFar, ctx, constant_f(f));
      const double exact = analytic_ei_nomax(f, mu, sd, al, y_min);
      if (exact == 0.0) ++zeros;
      CHECK(std::abs(mc.value - exact) <= 3.0 * mc.std_error + 1e-12);
    }
  }
  CHECK(zeros < 25);
}

}  // TEST_SUITE
