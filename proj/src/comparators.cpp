#include "albo/comparators.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "albo/design.hpp"
#include "albo/errors.hpp"
#include "albo/optimizer.hpp"

namespace albo {

namespace {

const Vector& not_applicable(std::size_t m) {
  thread_local Vector v;
  v.assign(m, std::numeric_limits<double>::quiet_NaN());
  return v;
}

double sample_sd(const std::vector<double>& v) {
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

}  // namespace

void SannConfig::validate() const {
  if (!(initial_temperature > 0.0)) throw InvalidArgument("SannConfig: temperature must be positive");
  if (evals_per_temperature == 0) throw InvalidArgument("SannConfig: evals_per_temperature must be positive");
  if (penalty_weight && !(*penalty_weight >= 0.0))
    throw InvalidArgument("SannConfig: penalty_weight must be nonnegative");
  if (objective_scale && !(*objective_scale > 0.0))
    throw InvalidArgument("SannConfig: objective_scale must be positive");
  if (budget == 0) throw InvalidArgument("SannConfig: budget must be positive");
  if ((!penalty_weight || !objective_scale) && calibration_samples < 2)
    throw InvalidArgument("SannConfig: calibration needs at least two samples");
}

double sann_composite(double f, std::span<const double> c, double penalty_weight,
                      double objective_scale) {
  double abs_sum = 0.0;
  for (double v : c) abs_sum += std::abs(v);
  return (f + penalty_weight * abs_sum) / objective_scale;
}

ProgressTrace run_sann(Problem& problem, const SannConfig& config, SannDiagnostics* diag) {
  config.validate();
  const std::size_t d = problem.dim();
  const std::size_t m = problem.constraints();
  const Hyperrectangle& box = problem.bounds();
  std::mt19937_64 rng(derive_seed(config.seed, 10));
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> normal;

  double weight = config.penalty_weight.value_or(0.0);
  double fscale = config.objective_scale.value_or(1.0);
  if (!config.penalty_weight || !config.objective_scale) {
    Problem scratch = problem;
    std::mt19937_64 crng(derive_seed(config.seed, 11));
    std::vector<double> fs, cs;
    Vector u(d);
    for (std::size_t i = 0; i < config.calibration_samples; ++i) {
      for (double& v : u) v = unif(crng);
      const Evaluation e = scratch.evaluate(box.from_unit(u));
      fs.push_back(e.f);
      double s = 0.0;
      for (double v : e.c) s += std::abs(v);
      cs.push_back(s);
    }
    const double sd_f = sample_sd(fs);
    const double sd_c = sample_sd(cs);
    if (!config.objective_scale) fscale = sd_f > 0.0 ? sd_f : 1.0;
    if (!config.penalty_weight) weight = sd_c > 0.0 ? (sd_f > 0.0 ? sd_f : 1.0) / sd_c : 1.0;
  }
  if (diag) {
    *diag = SannDiagnostics{};
    diag->penalty_weight = weight;
    diag->objective_scale = fscale;
  }

  ProgressTrace trace{d, m, {}};
  const Vector& na = not_applicable(m);
  const double nan = std::numeric_limits<double>::quiet_NaN();

  try {
    // x0 uniform in the box.
    Vector state(d);
    for (double& v : state) v = unif(rng);
    const Evaluation e0 = problem.evaluate(box.from_unit(state));
    trace.append(e0, na, nan, 0, "SANN");
    double y = sann_composite(e0.f, e0.c, weight, fscale);
    if (diag) {
      diag->composite.push_back(y);
      diag->accepted.push_back(true);
      diag->temperature.push_back(config.initial_temperature);
      diag->state.push_back(y);
    }

    const double step_scale = 1.0 / config.initial_temperature;
    std::size_t its = 1;
    Vector trial(d);
    while (trace.rows.size() < config.budget) {
      const double t = config.initial_temperature / std::log(static_cast<double>(its) + std::numbers::e - 1.0);
      for (std::size_t k = 0; k < config.evals_per_temperature && trace.rows.size() < config.budget; ++k, ++its) {
        bool inside = true;
        for (std::size_t i = 0; i < d; ++i) {
          trial[i] = state[i] + step_scale * t * normal(rng);
          inside = inside && trial[i] >= 0.0 && trial[i] <= 1.0;
        }
        if (!inside) {
          if (diag) ++diag->out_of_box;
          continue;
        }
        const Evaluation e = problem.evaluate(box.from_unit(trial));
        trace.append(e, na, nan, 0, "SANN");
        const double ytry = sann_composite(e.f, e.c, weight, fscale);
        const double dy = ytry - y;
        const bool accept = dy <= 0.0 || unif(rng) < std::exp(-dy / t);
        if (accept) {
          state = trial;
          y = ytry;
        }
        if (diag) {
          diag->composite.push_back(ytry);
          diag->accepted.push_back(accept);
          diag->temperature.push_back(t);
          diag->state.push_back(y);
        }
      }
    }
  } catch (const BlackboxError& ex) {
    throw RunAborted(ex.what(), RunAborted::Cause::Blackbox, trace);
  }
  return trace;
}

ProgressTrace run_oic_random(Problem& problem, const OicRandomConfig& config) {
  if (!problem.objective_known()) throw InvalidArgument("run_oic_random: objective must be known");
  if (config.budget == 0) throw InvalidArgument("run_oic_random: budget must be positive");
  const std::size_t m = problem.constraints();
  const Objective f = [&problem](std::span<const double> x) { return problem.objective(x); };
  ProgressTrace trace{problem.dim(), m, {}};
  const Vector& na = not_applicable(m);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  double f_star_min = std::numeric_limits<double>::infinity();
  try {
    for (std::size_t n = 1; n <= config.budget; ++n) {
      const auto seed = derive_seed(config.seed, 20, n);
      CandidateSet one = gen_oic_candidates(problem.bounds(), f, f_star_min, 1, seed);
      if (one.size() == 0) one = uniform_candidates(problem.bounds(), 1, seed);
      const Evaluation e = problem.evaluate(one.point(0));
      trace.append(e, na, nan, 0, "OIC");
      if (e.valid() && e.f < f_star_min) f_star_min = e.f;
    }
  } catch (const BlackboxError& ex) {
    throw RunAborted(ex.what(), RunAborted::Cause::Blackbox, trace);
  }
  return trace;
}

}  // namespace albo
