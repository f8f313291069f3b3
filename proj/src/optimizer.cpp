#include "albo/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "albo/auglag.hpp"

namespace albo {

std::string_view variant_name(Variant v) {
  switch (v) {
    case Variant::EY: return "EY";
    case Variant::EI: return "EI";
    case Variant::EY_nomax: return "EY-nomax";
    case Variant::EI_nomax: return "EI-nomax";
  }
  return "?";
}

std::optional<Variant> parse_variant(std::string_view name) {
  if (name == "EY") return Variant::EY;
  if (name == "EI") return Variant::EI;
  if (name == "EY-nomax" || name == "EY_nomax") return Variant::EY_nomax;
  if (name == "EI-nomax" || name == "EI_nomax") return Variant::EI_nomax;
  return std::nullopt;
}

bool uses_ei(Variant v) { return v == Variant::EI || v == Variant::EI_nomax; }
bool drops_max(Variant v) { return v == Variant::EY_nomax || v == Variant::EI_nomax; }

void SearchConfig::validate(std::size_t dim) const {
  if (n_init < 2 || n_init < dim + 1) throw InvalidArgument("SearchConfig: n_init must be >= d+1");
  if (budget < n_init) throw InvalidArgument("SearchConfig: budget must be >= n_init");
  if (!(ei_fraction > 0.0 && ei_fraction < 1.0))
    throw InvalidArgument("SearchConfig: ei_fraction must lie in (0,1)");
  if (n_cand == 0) throw InvalidArgument("SearchConfig: n_cand must be positive");
  if (samples == 0) throw InvalidArgument("SearchConfig: samples must be positive");
  if (!(improve_tol >= 0.0)) throw InvalidArgument("SearchConfig: improve_tol must be nonnegative");
  if (!(ei_tol >= 0.0)) throw InvalidArgument("SearchConfig: ei_tol must be nonnegative");
  if (!(rho0 > 0.0)) throw InvalidArgument("SearchConfig: rho0 must be positive");
  gp_start.validate();
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(mix(mix(base) ^ a) ^ (b * 0xd1b54a32d192ed03ULL));
}

// ---------------------------------------------------------------- inner search

namespace {

struct BatchPrediction {
  std::vector<double> f_mean, f_sd;
  std::vector<std::vector<double>> c_mean, c_sd;  // per constraint
};

BatchPrediction predict_candidates(const acq::AcquisitionContext& ctx,
                                   const CandidateSet& cands,
                                   const std::optional<Objective>& f_known) {
  const std::size_t N = cands.size();
  const std::size_t d = cands.dim;
  std::vector<double> unit(N * d);
  for (std::size_t i = 0; i < N; ++i) {
    const Vector u = ctx.bounds.to_unit(cands.point(i));
    std::copy(u.begin(), u.end(), unit.begin() + static_cast<std::ptrdiff_t>(i * d));
  }
  BatchPrediction out;
  out.f_mean.resize(N);
  out.f_sd.assign(N, 0.0);
  if (f_known) {
    for (std::size_t i = 0; i < N; ++i)
      out.f_mean[i] = std::isnan(cands.f_values[i]) ? (*f_known)(cands.point(i)) : cands.f_values[i];
  } else if (ctx.objective_model) {
    std::vector<double> var(N);
    ctx.objective_model->predict_batch(unit, N, out.f_mean, var);
    for (std::size_t i = 0; i < N; ++i) out.f_sd[i] = std::sqrt(var[i]);
  } else {
    throw InvalidArgument("inner_search: neither a known objective nor an objective surrogate");
  }
  const std::size_t m = ctx.constraints.size();
  out.c_mean.assign(m, std::vector<double>(N));
  out.c_sd.assign(m, std::vector<double>(N));
  for (std::size_t j = 0; j < m; ++j) {
    std::vector<double> var(N);
    ctx.constraints[j].predict_batch(unit, N, out.c_mean[j], var);
    for (std::size_t i = 0; i < N; ++i) out.c_sd[j][i] = std::sqrt(var[i]);
  }
  return out;
}

acq::PointPrediction point_of(const BatchPrediction& b, std::size_t i) {
  acq::PointPrediction p;
  p.objective_mean = b.f_mean[i];
  p.objective_sd = b.f_sd[i];
  for (std::size_t j = 0; j < b.c_mean.size(); ++j) {
    p.constraint_mean.push_back(b.c_mean[j][i]);
    p.constraint_sd.push_back(b.c_sd[j][i]);
  }
  return p;
}

}  // namespace

SearchStep inner_search(const acq::AcquisitionContext& ctx, const SearchConfig& config,
                        const InnerLoopState& loop, const CandidateSet& candidates,
                        const std::optional<Objective>& f_known) {
  SearchStep step;
  const bool may_converge = loop.evaluations > 0;
  if (may_converge && loop.stall >= config.stall_limit) {
    step.converged = true;
    step.reason = "stall";
    return step;
  }
  if (candidates.size() == 0) {
    step.converged = true;
    step.reason = "no_candidates";
    return step;
  }

  const std::size_t N = candidates.size();
  const auto pred = predict_candidates(ctx, candidates, f_known);

  auto argmin_ey = [&] {
    std::size_t best = 0;
    double best_v = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < N; ++i) {
      const double v = acq::expected_composite(point_of(pred, i), ctx.al, ctx.drop_max);
      if (v < best_v) {
        best_v = v;
        best = i;
      }
    }
    return best;
  };

  bool use_ey = !uses_ei(config.variant);
  if (!use_ey) {
    const bool modeled_f = std::any_of(pred.f_sd.begin(), pred.f_sd.end(), [](double s) { return s > 0.0; });
    const auto draws = acq::StandardDraws::generate(ctx.constraints.size(), ctx.samples,
                                                    modeled_f, ctx.rng_seed);
    std::size_t best = 0;
    double best_v = -1.0;
    std::size_t nonzero = 0;
    for (std::size_t i = 0; i < N; ++i) {
      const double v = acq::mc_improvement(point_of(pred, i), ctx.al, ctx.drop_max, ctx.y_min, draws).value;
      if (v > 0.0) ++nonzero;
      if (v > best_v) {
        best_v = v;
        best = i;
      }
    }
    step.max_ei = std::max(0.0, best_v);
    step.nonzero_fraction = static_cast<double>(nonzero) / static_cast<double>(N);
    if (step.nonzero_fraction < config.ei_fraction) {
      use_ey = true;
    } else if (step.max_ei < config.ei_tol && may_converge) {
      step.converged = true;
      step.reason = "ei_tol";
      return step;
    } else if (step.max_ei < config.ei_tol) {
      use_ey = true;
    } else {
      step.index = best;
      step.decision = "EI";
    }
  }
  if (use_ey) {
    step.index = argmin_ey();
    step.decision = "EY";
  }
  const auto x = candidates.point(step.index);
  step.x.assign(x.begin(), x.end());
  return step;
}

// ---------------------------------------------------------------- driver

namespace {

class SurrogateSet {
 public:
  SurrogateSet(const Problem& problem, const SearchConfig& config)
      : bounds_(problem.bounds()), config_(config), m_(problem.constraints()),
        model_f_(!problem.objective_known()) {}

  void fit(std::span<const Evaluation> history) {
    constraints_.clear();
    for (std::size_t j = 0; j < m_; ++j) {
      gp::DesignSet design(bounds_.dim());
      for (const auto& e : history) design.add(bounds_.to_unit(e.x), e.c[j]);
      constraints_.push_back(refit(gp::fit_gp(std::move(design), config_.gp_start)));
    }
    if (model_f_) {
      gp::DesignSet design(bounds_.dim());
      for (const auto& e : history) design.add(bounds_.to_unit(e.x), e.f);
      objective_ = refit(gp::fit_gp(std::move(design), config_.gp_start));
    }
  }

  void add(const Evaluation& e) {
    const Vector u = bounds_.to_unit(e.x);
    for (std::size_t j = 0; j < m_; ++j)
      constraints_[j] = refit(gp::update_gp(constraints_[j], u, e.c[j]));
    if (objective_) objective_ = refit(gp::update_gp(*objective_, u, e.f));
  }

  std::vector<gp::GPSurrogate> constraints() const { return constraints_; }
  const std::optional<gp::GPSurrogate>& objective() const { return objective_; }

 private:
  gp::GPSurrogate refit(gp::GPSurrogate s) const {
    const gp::GPHyper h = gp::mle_lengthscale(s, config_.lengthscale_bounds);
    if (h.lengthscale == s.hypers().lengthscale && h.scale == s.hypers().scale) return s;
    return gp::fit_gp(s.design(), h);
  }

  Hyperrectangle bounds_;
  const SearchConfig& config_;
  std::size_t m_;
  bool model_f_;
  std::vector<gp::GPSurrogate> constraints_;
  std::optional<gp::GPSurrogate> objective_;
};

}  // namespace

ProgressTrace optim_auglag(Problem& problem, const SearchConfig& config) {
  config.validate(problem.dim());
  const std::size_t m = problem.constraints();
  const bool drop_max = drops_max(config.variant);
  std::optional<Objective> f_known;
  if (problem.objective_known()) f_known = [&problem](std::span<const double> x) { return problem.objective(x); };

  ProgressTrace trace{problem.dim(), m, {}};
  std::vector<Evaluation> history;
  ALParams al = ALParams::initial(m, config.rho0);

  auto evaluate = [&](std::span<const double> x, const std::string& decision) {
    Evaluation e = problem.evaluate(x);
    trace.append(e, al.lambda, al.rho, al.k, decision);
    history.push_back(std::move(e));
    return history.back();
  };

  try {
    for (const auto& x : initial_design(problem.bounds(), config.n_init, derive_seed(config.seed, 0)))
      evaluate(x, "init");
    if (history.size() >= config.budget) return trace;

    SurrogateSet models(problem, config);
    models.fit(history);

    std::size_t loop_start = 0;  // the initial design belongs to the first inner loop
    InnerLoopState loop{history.size(), 0};
    double y_min = best_al_value(history, al, drop_max);
    std::uint64_t step_no = 0;

    while (history.size() < config.budget) {
      ++step_no;
      double f_star_min = std::numeric_limits<double>::infinity();
      for (const auto& e : history) {
        if (e.valid()) f_star_min = std::min(f_star_min, e.f);
      }
      const std::uint64_t cand_seed = derive_seed(config.seed, 1, step_no);
      CandidateSet cands = f_known ? gen_oic_candidates(problem.bounds(), *f_known, f_star_min,
                                                        config.n_cand, cand_seed)
                                   : uniform_candidates(problem.bounds(), config.n_cand, cand_seed);
      if (cands.size() == 0 && loop.evaluations == 0)
        cands = uniform_candidates(problem.bounds(), config.n_cand, cand_seed);

      acq::AcquisitionContext ctx;
      ctx.constraints = models.constraints();
      ctx.objective_model = models.objective();
      ctx.bounds = problem.bounds();
      ctx.al = al;
      ctx.y_min = y_min;
      ctx.drop_max = drop_max;
      ctx.samples = config.samples;
      ctx.rng_seed = derive_seed(config.seed, 2, step_no);

      const SearchStep step = inner_search(ctx, config, loop, cands, f_known);
      if (step.converged) {
        // x^k: the inner loop's AL incumbent under the parameters it searched with.
        const auto loop_hist = std::span<const Evaluation>(history).subspan(loop_start);
        const std::size_t idx = loop_start + best_al_index(loop_hist, al, drop_max);
        const Vector& ck = history[idx].c;
        ALParams next = update_penalty(update_multipliers(al, ck), ck);
        next.k = al.k + 1;
        al = std::move(next);
        loop_start = history.size();
        loop = InnerLoopState{};
        y_min = best_al_value(history, al, drop_max);
        continue;
      }

      const Evaluation& e = evaluate(step.x, step.decision);
      models.add(e);
      ++loop.evaluations;
      const double v = al_value(e.f, e.c, al, drop_max).value;
      if (v < y_min - config.improve_tol * std::abs(y_min))
        loop.stall = 0;
      else
        ++loop.stall;
      y_min = std::min(y_min, v);
    }
  } catch (const BlackboxError& ex) {
    throw RunAborted(ex.what(), RunAborted::Cause::Blackbox, trace);
  } catch (const NumericalError& ex) {
    throw RunAborted(ex.what(), RunAborted::Cause::Numerical, trace);
  }
  return trace;
}

}  // namespace albo
