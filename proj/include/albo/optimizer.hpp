#pragma once

// Surrogate-assisted augmented Lagrangian driver. Each blackbox constraint
// gets its own GP; the inner loop scores objective-improving candidates by
// E{Y} or Monte Carlo E{I_Y} under the current multipliers and penalty, and
// the outer loop updates (lambda, rho) whenever the inner search converges.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "albo/acquisition.hpp"
#include "albo/design.hpp"
#include "albo/errors.hpp"
#include "albo/gp.hpp"
#include "albo/problems.hpp"
#include "albo/trace.hpp"

namespace albo {

enum class Variant { EY, EI, EY_nomax, EI_nomax };

std::string_view variant_name(Variant v);
/// Accepts "EY", "EI", "EY-nomax", "EI-nomax" (underscore also accepted).
std::optional<Variant> parse_variant(std::string_view name);
bool uses_ei(Variant v);
bool drops_max(Variant v);

struct SearchConfig {
  std::size_t n_init = 10;
  std::size_t n_cand = 1000;
  std::size_t samples = 100;      // Monte Carlo draws T
  std::size_t stall_limit = 10;
  // A trial only resets the stall counter when it beats the best AL value
  // by more than improve_tol * |best|. 0 counts any strict decrease.
  double improve_tol = 0.05;
  double ei_tol = 1e-5;
  double ei_fraction = 0.05;
  Variant variant = Variant::EI;
  std::size_t budget = 100;
  std::uint64_t seed = 0;

  double rho0 = 0.5;
  gp::GPHyper gp_start{0.1, 1e-6, 1.0};
  gp::Interval lengthscale_bounds{1e-2, 10.0};

  /// Throws InvalidArgument unless n_init >= dim+1 (and >= 2),
  /// budget >= n_init, 0 < ei_fraction < 1, n_cand >= 1, samples >= 1.
  void validate(std::size_t dim) const;
};

/// Progress of the current inner loop.
struct InnerLoopState {
  std::size_t evaluations = 0;  // blackbox calls since the loop began
  std::size_t stall = 0;        // consecutive calls that did not lower y_min
};

struct SearchStep {
  bool converged = false;
  std::string reason;       // "stall", "ei_tol", "no_candidates" when converged
  std::size_t index = 0;    // chosen candidate
  Vector x;
  std::string decision;     // "EI" or "EY"
  double max_ei = 0.0;
  double nonzero_fraction = 0.0;
};

/// One inner-loop step over a fixed candidate set. Declares convergence
/// after `stall_limit` non-improving trials, when max EI < ei_tol, or when
/// the set is empty; convergence is only allowed once the loop has made at
/// least one evaluation, otherwise the step falls back to E{Y}.
SearchStep inner_search(const acq::AcquisitionContext& ctx, const SearchConfig& config,
                        const InnerLoopState& loop, const CandidateSet& candidates,
                        const std::optional<Objective>& f_known);

/// Thrown by the drivers when a run cannot continue; carries what was done.
class RunAborted : public Error {
 public:
  enum class Cause { Blackbox, Numerical, Other };
  RunAborted(const std::string& what, Cause cause, ProgressTrace partial)
      : Error(what), cause_(cause), partial_(std::move(partial)) {}
  Cause cause() const noexcept { return cause_; }
  const ProgressTrace& partial_trace() const noexcept { return partial_; }

 private:
  Cause cause_;
  ProgressTrace partial_;
};

/// Runs the full optimization until `config.budget` evaluations.
ProgressTrace optim_auglag(Problem& problem, const SearchConfig& config);

/// Mixes a base seed with stream identifiers (splitmix64).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0);

}  // namespace albo
