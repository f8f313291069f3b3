#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "albo/problems.hpp"

namespace albo {

/// Multipliers, penalty and outer-iteration index of the augmented Lagrangian.
struct ALParams {
  Vector lambda;     // >= 0 componentwise
  double rho = 0.5;  // > 0, only ever halved
  std::size_t k = 0;

  /// lambda = 0, rho = rho0, k = 0.
  static ALParams initial(std::size_t m, double rho0 = 0.5);
  /// Throws InvalidArgument on negative multipliers or nonpositive rho.
  void validate() const;
};

struct ALValue {
  double value = 0.0;
  double objective = 0.0;     // f
  double linear = 0.0;        // lambda' c
  double penalty = 0.0;       // (1/2rho) sum h(c_j)^2, h = max(0,.) or identity
};

/// f + lambda'c + (1/2rho) sum max(0,c_j)^2; with drop_max the max is removed.
ALValue al_value(double f, std::span<const double> c, const ALParams& p, bool drop_max);

/// lambda_j <- max(0, lambda_j + c_j / rho). k and rho are left alone.
ALParams update_multipliers(const ALParams& p, std::span<const double> c_at_xk);

/// rho is kept when every c_j <= 0 and halved otherwise.
ALParams update_penalty(const ALParams& p, std::span<const double> c_at_xk);

/// Smallest al_value over the history under the current parameters.
/// Throws InvalidArgument for an empty history.
double best_al_value(std::span<const Evaluation> history, const ALParams& p, bool drop_max);

/// Index of the evaluation attaining best_al_value (lowest index on ties).
std::size_t best_al_index(std::span<const Evaluation> history, const ALParams& p, bool drop_max);

}  // namespace albo
