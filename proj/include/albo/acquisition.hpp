#pragma once

// Acquisition mathematics for the separated surrogate composite
//   Y(x) = Y_f(x) + lambda' Y_c(x) + (1/2rho) sum_j h(Y_cj(x))^2,
// h = max(0, .) or, for the "nomax" variants, the identity.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "albo/auglag.hpp"
#include "albo/gp.hpp"
#include "albo/problems.hpp"

namespace albo::acq {

/// Closed-form expected improvement of N(mu, sigma^2) below f_min.
double ei_gaussian(double mu, double sigma, double f_min);

/// E{max(0, Y)^2} for Y ~ N(mu, sigma^2).
double expected_sq_hinge(double mu, double sigma);

/// Predictive summary of the composite's ingredients at one point. When the
/// objective is known, objective_sd is 0 and objective_mean is f(x).
struct PointPrediction {
  double objective_mean = 0.0;
  double objective_sd = 0.0;
  Vector constraint_mean;
  Vector constraint_sd;
};

/// Standard normal draws shared by every candidate of one search step
/// (common random numbers): constraint-major m x T, plus T for the
/// objective when it is modeled.
struct StandardDraws {
  std::size_t constraints = 0;
  std::size_t samples = 0;
  std::vector<double> constraint_z;
  std::vector<double> objective_z;

  static StandardDraws generate(std::size_t m, std::size_t samples, bool with_objective,
                                std::uint64_t seed);
};

struct AcquisitionScore {
  double value = 0.0;
  double std_error = 0.0;
};

/// E{Y} in closed form from a point prediction.
double expected_composite(const PointPrediction& p, const ALParams& al, bool drop_max);

/// Monte Carlo E{max(0, y_min - Y)} from a point prediction and fixed draws.
/// Throws InvalidArgument when y_min is not finite.
AcquisitionScore mc_improvement(const PointPrediction& p, const ALParams& al, bool drop_max,
                                double y_min, const StandardDraws& draws);

/// Surrogates and AL state needed to score points given in problem coordinates.
struct AcquisitionContext {
  std::vector<gp::GPSurrogate> constraints;
  std::optional<gp::GPSurrogate> objective_model;  // used when f is not known
  Hyperrectangle bounds;                           // maps x to the unit cube
  ALParams al;
  double y_min = 0.0;
  bool drop_max = false;
  std::size_t samples = 100;
  std::uint64_t rng_seed = 0;
};

/// Prediction of every ingredient at x. `f_known` takes precedence over the
/// context's objective model.
PointPrediction predict_point(std::span<const double> x, const AcquisitionContext& ctx,
                              const std::optional<Objective>& f_known);

/// Closed-form E{Y(x)} (hinge expectation, or mu^2 + sigma^2 with drop_max).
double ey_composite(std::span<const double> x, const AcquisitionContext& ctx,
                    const std::optional<Objective>& f_known);

/// Monte Carlo EI with ctx.samples draws seeded by ctx.rng_seed.
AcquisitionScore mc_ei(std::span<const double> x, const AcquisitionContext& ctx,
                       const std::optional<Objective>& f_known);

/// Exact EI of the single-constraint no-max composite f + lambda Y + Y^2/(2rho)
/// with Y ~ N(mu, sigma^2) and known f. Zero whenever
/// lambda^2 - 2 (f - y_min_tilde) / rho < 0.
double analytic_ei_nomax(double f, double mu, double sigma, const ALParams& p,
                         double y_min_tilde);

}  // namespace albo::acq
