#pragma once

// Monte Carlo experiments over seeds and per-checkpoint quantile summaries.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "albo/problems.hpp"
#include "albo/trace.hpp"

namespace albo {

enum class Method { EY, EI, EY_nomax, EI_nomax, SANN, OIC_random };

std::string_view method_name(Method m);
/// EY | EI | EY-nomax | EI-nomax | SANN | OIC-random
std::optional<Method> parse_method(std::string_view name);

/// Where a run's problem comes from.
struct ProblemSpec {
  std::string id = "toy";             // "toy" or "external"
  std::string blackbox_cmd;           // external only
  std::size_t dim = 0;                // external only
  std::size_t m = 0;                  // external only
  std::string objective = "blackbox"; // external only: "blackbox" or "sum"
  std::optional<Hyperrectangle> bounds;

  /// Builds a fresh problem (a new child process for external ones).
  Problem make() const;
};

/// Runs one method with library defaults for everything but budget and seed.
ProgressTrace run_method(Problem& problem, Method method, std::size_t budget, std::uint64_t seed);

struct ExperimentSpec {
  ProblemSpec problem;
  Method method = Method::EI;
  std::size_t reps = 100;
  std::size_t budget = 100;
  std::uint64_t base_seed = 0;
  std::vector<std::size_t> checkpoints{25, 50, 100};
  std::filesystem::path output;        // directory; empty = do not write files
  std::size_t workers = 1;
  std::optional<double> placeholder;   // substitute for reps with no valid point

  void validate() const;
};

struct SummaryCell {
  std::string method;
  std::size_t checkpoint = 0;
  double mean = 0.0;
  double q05 = 0.0;
  double q95 = 0.0;
  std::size_t reps = 0;
  std::size_t no_valid = 0;  // reps that needed the placeholder
};

struct SummaryTable {
  double placeholder = 0.0;
  std::vector<SummaryCell> cells;

  const SummaryCell& at(std::string_view method, std::size_t checkpoint) const;
};

/// Empirical quantile with linear interpolation between order statistics
/// (the "type 7" estimator). `values` need not be sorted.
double quantile_type7(std::vector<double> values, double p);

/// Default placeholder: 2 * worst observed f when positive, worst + 1 otherwise.
double default_placeholder(std::span<const ProgressTrace> traces);

/// Aggregates best_valid_f at each checkpoint. Throws InvalidArgument when
/// there are no traces or a checkpoint lies beyond some trace.
SummaryTable summarize(std::span<const ProgressTrace> traces, std::span<const std::size_t> checkpoints,
                       std::string method_label, std::optional<double> placeholder = std::nullopt);

/// Same trace, validity re-judged as max(0, c) <= tol.
ProgressTrace relaxed_view(const ProgressTrace& trace, double tol);

/// `method,n,mean,q05,q95,reps,no_valid,placeholder`
void write_summary_csv(std::ostream& os, const SummaryTable& table, bool header = true);

struct RepFailure {
  std::size_t rep = 0;
  std::string message;
};

struct ExperimentResult {
  std::vector<ProgressTrace> traces;      // completed reps, in rep order
  std::vector<std::size_t> completed;     // their rep indices
  std::vector<RepFailure> failures;
  SummaryTable table;
  std::optional<SummaryTable> relaxed;    // SANN only: 1e-3 relaxed validity
};

/// Runs reps with seeds base_seed + i on `workers` threads. Writes
/// trace_<method>_rep<i>.csv per rep and summary_<method>.csv into
/// spec.output when set. Output does not depend on the worker count.
ExperimentResult run_experiment(const ExperimentSpec& spec);

}  // namespace albo
