#pragma once

// Baselines: simulated annealing on an additive-penalty composite, and pure
// random search over objective-improving candidates.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "albo/problems.hpp"
#include "albo/trace.hpp"

namespace albo {

struct SannConfig {
  double initial_temperature = 10.0;
  std::size_t evals_per_temperature = 10;
  /// Weight on sum_j |c_j| relative to f. Empty: sd(f) / sd(sum |c|) over
  /// `calibration_samples` uniform points, so both parts have equal spread.
  std::optional<double> penalty_weight;
  /// The composite is divided by this. Empty: sd(f) over the same samples.
  std::optional<double> objective_scale;
  std::size_t calibration_samples = 100;
  std::size_t budget = 100;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Per-proposal record, filled when requested.
struct SannDiagnostics {
  double penalty_weight = 0.0;
  double objective_scale = 1.0;
  std::vector<double> composite;    // composite at each evaluated proposal
  std::vector<bool> accepted;       // Metropolis outcome per evaluated proposal
  std::vector<double> temperature;  // temperature each evaluated proposal saw
  std::vector<double> state;        // composite of the chain state after each step
  std::size_t out_of_box = 0;       // proposals rejected without evaluation
};

/// Annealing on the unit-scaled box with Gaussian increments of sd
/// t / initial_temperature and temperature
/// initial_temperature / ln(s * evals_per_temperature + e) at stage s.
/// Proposals outside the box are rejected without a blackbox call (they
/// still advance the annealing clock). Calibration samples, when needed,
/// run on a copy of the problem and are not counted.
ProgressTrace run_sann(Problem& problem, const SannConfig& config,
                       SannDiagnostics* diagnostics = nullptr);

/// Composite minimized by run_sann, in problem coordinates.
double sann_composite(double f, std::span<const double> c, double penalty_weight,
                      double objective_scale);

struct OicRandomConfig {
  std::size_t budget = 100;
  std::uint64_t seed = 0;
};

/// Each trial draws one objective-improving candidate against the current
/// best valid objective (uniform until one exists) and evaluates it.
/// Requires a known objective.
ProgressTrace run_oic_random(Problem& problem, const OicRandomConfig& config);

}  // namespace albo
