#include "albo/auglag.hpp"

#include <algorithm>
#include <cmath>

#include "albo/errors.hpp"

namespace albo {

ALParams ALParams::initial(std::size_t m, double rho0) {
  ALParams p{Vector(m, 0.0), rho0, 0};
  p.validate();
  return p;
}

void ALParams::validate() const {
  if (!(rho > 0.0) || !std::isfinite(rho)) throw InvalidArgument("ALParams: rho must be positive");
  for (double l : lambda) {
    if (!(l >= 0.0) || !std::isfinite(l)) throw InvalidArgument("ALParams: lambda must be >= 0");
  }
}

ALValue al_value(double f, std::span<const double> c, const ALParams& p, bool drop_max) {
  if (c.size() != p.lambda.size()) throw InvalidArgument("al_value: constraint arity mismatch");
  ALValue out;
  out.objective = f;
  double sq = 0.0;
  for (std::size_t j = 0; j < c.size(); ++j) {
    out.linear += p.lambda[j] * c[j];
    const double h = drop_max ? c[j] : std::max(0.0, c[j]);
    sq += h * h;
  }
  out.penalty = sq / (2.0 * p.rho);
  out.value = out.objective + out.linear + out.penalty;
  return out;
}

ALParams update_multipliers(const ALParams& p, std::span<const double> c_at_xk) {
  if (c_at_xk.size() != p.lambda.size())
    throw InvalidArgument("update_multipliers: constraint arity mismatch");
  ALParams out = p;
  for (std::size_t j = 0; j < c_at_xk.size(); ++j)
    out.lambda[j] = std::max(0.0, p.lambda[j] + c_at_xk[j] / p.rho);
  return out;
}

ALParams update_penalty(const ALParams& p, std::span<const double> c_at_xk) {
  ALParams out = p;
  const bool feasible =
      std::all_of(c_at_xk.begin(), c_at_xk.end(), [](double v) { return v <= 0.0; });
  if (!feasible) out.rho = 0.5 * p.rho;
  return out;
}

std::size_t best_al_index(std::span<const Evaluation> history, const ALParams& p, bool drop_max) {
  if (history.empty()) throw InvalidArgument("best_al_value: empty history");
  std::size_t best = 0;
  double best_v = al_value(history[0].f, history[0].c, p, drop_max).value;
  for (std::size_t i = 1; i < history.size(); ++i) {
    const double v = al_value(history[i].f, history[i].c, p, drop_max).value;
    if (v < best_v) {
      best_v = v;
      best = i;
    }
  }
  return best;
}

double best_al_value(std::span<const Evaluation> history, const ALParams& p, bool drop_max) {
  const std::size_t i = best_al_index(history, p, drop_max);
  return al_value(history[i].f, history[i].c, p, drop_max).value;
}

}  // namespace albo
