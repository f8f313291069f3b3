#include "albo/acquisition.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "albo/errors.hpp"
#include "albo/normal.hpp"
#include "albo/simd/dispatch.hpp"

namespace albo::acq {

double ei_gaussian(double mu, double sigma, double f_min) {
  if (sigma < 0.0) throw InvalidArgument("ei_gaussian: sigma must be nonnegative");
  const double diff = f_min - mu;
  if (sigma == 0.0) return std::max(0.0, diff);
  const double z = diff / sigma;
  return std::max(0.0, diff * normal_cdf(z) + sigma * normal_pdf(z));
}

double expected_sq_hinge(double mu, double sigma) {
  if (sigma < 0.0) throw InvalidArgument("expected_sq_hinge: sigma must be nonnegative");
  if (sigma == 0.0) {
    const double h = std::max(0.0, mu);
    return h * h;
  }
  const double r = mu / sigma;
  return std::max(0.0, sigma * sigma * ((1.0 + r * r) * normal_cdf(r) + r * normal_pdf(r)));
}

StandardDraws StandardDraws::generate(std::size_t m, std::size_t samples, bool with_objective,
                                      std::uint64_t seed) {
  if (samples == 0) throw InvalidArgument("StandardDraws: need at least one sample");
  StandardDraws d;
  d.constraints = m;
  d.samples = samples;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  d.constraint_z.resize(m * samples);
  for (double& z : d.constraint_z) z = normal(rng);
  if (with_objective) {
    d.objective_z.resize(samples);
    for (double& z : d.objective_z) z = normal(rng);
  }
  return d;
}

double expected_composite(const PointPrediction& p, const ALParams& al, bool drop_max) {
  double out = p.objective_mean;
  double sq = 0.0;
  for (std::size_t j = 0; j < p.constraint_mean.size(); ++j) {
    const double mu = p.constraint_mean[j];
    const double sd = p.constraint_sd[j];
    out += al.lambda[j] * mu;
    sq += drop_max ? mu * mu + sd * sd : expected_sq_hinge(mu, sd);
  }
  return out + sq / (2.0 * al.rho);
}

AcquisitionScore mc_improvement(const PointPrediction& p, const ALParams& al, bool drop_max,
                                double y_min, const StandardDraws& draws) {
  if (!std::isfinite(y_min)) throw InvalidArgument("mc_ei: y_min must be finite (empty history?)");
  const std::size_t m = p.constraint_mean.size();
  if (draws.constraints != m) throw InvalidArgument("mc_ei: draw/constraint count mismatch");
  const bool sample_f = p.objective_sd > 0.0;
  if (sample_f && draws.objective_z.size() != draws.samples)
    throw InvalidArgument("mc_ei: objective draws missing for a modeled objective");

  simd::CompositeDraws in;
  in.z = draws.constraint_z;
  in.samples = draws.samples;
  in.mean = p.constraint_mean;
  in.sd = p.constraint_sd;
  in.lambda = al.lambda;
  in.inv_two_rho = 1.0 / (2.0 * al.rho);
  in.objective = p.objective_mean;
  in.drop_max = drop_max;
  simd::ObjectiveDraws fz;
  if (sample_f) {
    fz.z = draws.objective_z;
    fz.sd = p.objective_sd;
  }
  const auto sums = simd::composite_improvement(in, fz, y_min);

  const double T = static_cast<double>(draws.samples);
  AcquisitionScore s;
  s.value = std::max(0.0, sums.sum / T);
  if (draws.samples > 1) {
    const double var = std::max(0.0, (sums.sum_sq - T * s.value * s.value) / (T - 1.0));
    s.std_error = std::sqrt(var / T);
  }
  return s;
}

PointPrediction predict_point(std::span<const double> x, const AcquisitionContext& ctx,
                              const std::optional<Objective>& f_known) {
  const Vector u = ctx.bounds.to_unit(x);
  PointPrediction p;
  if (f_known) {
    p.objective_mean = (*f_known)(x);
  } else if (ctx.objective_model) {
    const auto pf = ctx.objective_model->predict(u);
    p.objective_mean = pf.mean;
    p.objective_sd = std::sqrt(pf.variance);
  } else {
    throw InvalidArgument("acquisition: neither a known objective nor an objective surrogate");
  }
  p.constraint_mean.reserve(ctx.constraints.size());
  p.constraint_sd.reserve(ctx.constraints.size());
  for (const auto& gp : ctx.constraints) {
    const auto pc = gp.predict(u);
    p.constraint_mean.push_back(pc.mean);
    p.constraint_sd.push_back(std::sqrt(pc.variance));
  }
  return p;
}

double ey_composite(std::span<const double> x, const AcquisitionContext& ctx,
                    const std::optional<Objective>& f_known) {
  return expected_composite(predict_point(x, ctx, f_known), ctx.al, ctx.drop_max);
}

AcquisitionScore mc_ei(std::span<const double> x, const AcquisitionContext& ctx,
                       const std::optional<Objective>& f_known) {
  if (ctx.samples < 1) throw InvalidArgument("mc_ei: need at least one sample");
  if (!std::isfinite(ctx.y_min)) throw InvalidArgument("mc_ei: y_min must be finite (empty history?)");
  const auto p = predict_point(x, ctx, f_known);
  const auto draws = StandardDraws::generate(ctx.constraints.size(), ctx.samples,
                                             p.objective_sd > 0.0, ctx.rng_seed);
  return mc_improvement(p, ctx.al, ctx.drop_max, ctx.y_min, draws);
}

double analytic_ei_nomax(double f, double mu, double sigma, const ALParams& p,
                         double y_min_tilde) {
  if (p.lambda.size() != 1) throw InvalidArgument("analytic_ei_nomax: single constraint only");
  if (sigma < 0.0) throw InvalidArgument("analytic_ei_nomax: sigma must be nonnegative");
  const double lambda = p.lambda[0];
  const double rho = p.rho;
  const double disc = lambda * lambda - 2.0 * (f - y_min_tilde) / rho;
  if (disc < 0.0) return 0.0;
  if (sigma == 0.0) return std::max(0.0, y_min_tilde - (f + lambda * mu + mu * mu / (2.0 * rho)));

  const double root = std::sqrt(disc);
  const double u_minus = rho * (-lambda - root);
  const double u_plus = rho * (-lambda + root);
  const double v1 = (u_minus - mu) / sigma;
  const double v2 = (u_plus - mu) / sigma;
  const double pdf1 = normal_pdf(v1);
  const double pdf2 = normal_pdf(v2);
  // Phi(v2) - Phi(v1) via the upper tail when both sit far right.
  const double dcdf = v1 > 0.0 ? normal_cdf(-v1) - normal_cdf(-v2) : normal_cdf(v2) - normal_cdf(v1);

  const double s2 = sigma * sigma / (2.0 * rho);
  const double head = y_min_tilde - (mu * mu / (2.0 * rho) + lambda * mu + f) - s2;
  const double ei = head * dcdf + (sigma * mu / rho + lambda * sigma) * (pdf2 - pdf1) +
                    s2 * (v2 * pdf2 - v1 * pdf1);
  return std::max(0.0, ei);
}

}  // namespace albo::acq
