#include "albo/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <mutex>
#include <ostream>
#include <thread>

#include "albo/comparators.hpp"
#include "albo/errors.hpp"
#include "albo/optimizer.hpp"

namespace albo {

std::string_view method_name(Method m) {
  switch (m) {
    case Method::EY: return "EY";
    case Method::EI: return "EI";
    case Method::EY_nomax: return "EY-nomax";
    case Method::EI_nomax: return "EI-nomax";
    case Method::SANN: return "SANN";
    case Method::OIC_random: return "OIC-random";
  }
  return "?";
}

std::optional<Method> parse_method(std::string_view name) {
  for (Method m : {Method::EY, Method::EI, Method::EY_nomax, Method::EI_nomax, Method::SANN,
                   Method::OIC_random}) {
    if (name == method_name(m)) return m;
  }
  if (name == "EY_nomax") return Method::EY_nomax;
  if (name == "EI_nomax") return Method::EI_nomax;
  if (name == "OIC_random") return Method::OIC_random;
  return std::nullopt;
}

Problem ProblemSpec::make() const {
  if (id == "toy") return toy_problem();
  if (id == "external") {
    if (blackbox_cmd.empty()) throw InvalidArgument("external problem needs a blackbox command");
    if (dim == 0 || m == 0) throw InvalidArgument("external problem needs --dim and --m");
    ExternalOptions opts;
    opts.bounds = bounds;
    if (objective == "sum") {
      opts.known_objective = [](std::span<const double> x) {
        double s = 0.0;
        for (double v : x) s += v;
        return s;
      };
    } else if (objective != "blackbox") {
      throw InvalidArgument("unknown objective kind '" + objective + "'");
    }
    return external_blackbox(blackbox_cmd, dim, m, std::move(opts));
  }
  throw InvalidArgument("unknown problem '" + id + "'");
}

ProgressTrace run_method(Problem& problem, Method method, std::size_t budget, std::uint64_t seed) {
  switch (method) {
    case Method::SANN: {
      SannConfig cfg;
      cfg.budget = budget;
      cfg.seed = seed;
      return run_sann(problem, cfg);
    }
    case Method::OIC_random:
      return run_oic_random(problem, OicRandomConfig{budget, seed});
    default: {
      SearchConfig cfg;
      cfg.budget = budget;
      cfg.seed = seed;
      cfg.variant = method == Method::EY         ? Variant::EY
                    : method == Method::EY_nomax ? Variant::EY_nomax
                    : method == Method::EI_nomax ? Variant::EI_nomax
                                                 : Variant::EI;
      return optim_auglag(problem, cfg);
    }
  }
}

void ExperimentSpec::validate() const {
  if (reps == 0) throw InvalidArgument("reps must be >= 1");
  if (budget == 0) throw InvalidArgument("budget must be >= 1");
  if (checkpoints.empty()) throw InvalidArgument("at least one checkpoint is required");
  for (std::size_t c : checkpoints) {
    if (c < 1 || c > budget) throw InvalidArgument("checkpoints must lie in [1, budget]");
  }
  if (workers == 0) throw InvalidArgument("workers must be >= 1");
}

const SummaryCell& SummaryTable::at(std::string_view method, std::size_t checkpoint) const {
  for (const auto& c : cells) {
    if (c.method == method && c.checkpoint == checkpoint) return c;
  }
  throw InvalidArgument("summary has no cell for " + std::string(method) + " at n=" +
                        std::to_string(checkpoint));
}

double quantile_type7(std::vector<double> values, double p) {
  if (values.empty()) throw InvalidArgument("quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= values.size()) return values.back();
  return values[lo] + (h - static_cast<double>(lo)) * (values[lo + 1] - values[lo]);
}

double default_placeholder(std::span<const ProgressTrace> traces) {
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& t : traces) {
    for (const auto& r : t.rows) worst = std::max(worst, r.f);
  }
  if (!std::isfinite(worst)) return 1.0;
  return worst > 0.0 ? 2.0 * worst : worst + 1.0;
}

SummaryTable summarize(std::span<const ProgressTrace> traces, std::span<const std::size_t> checkpoints,
                       std::string method_label, std::optional<double> placeholder) {
  if (traces.empty()) throw InvalidArgument("summarize: no traces");
  if (checkpoints.empty()) throw InvalidArgument("summarize: no checkpoints");
  SummaryTable table;
  table.placeholder = placeholder.value_or(default_placeholder(traces));
  for (std::size_t n : checkpoints) {
    SummaryCell cell;
    cell.method = method_label;
    cell.checkpoint = n;
    cell.reps = traces.size();
    std::vector<double> values;
    values.reserve(traces.size());
    for (const auto& t : traces) {
      double v = t.best_valid_at(n);
      if (!std::isfinite(v)) {
        v = table.placeholder;
        ++cell.no_valid;
      }
      values.push_back(v);
    }
    double sum = 0.0;
    for (double v : values) sum += v;
    cell.mean = sum / static_cast<double>(values.size());
    cell.q05 = quantile_type7(values, 0.05);
    cell.q95 = quantile_type7(std::move(values), 0.95);
    table.cells.push_back(std::move(cell));
  }
  return table;
}

ProgressTrace relaxed_view(const ProgressTrace& trace, double tol) {
  ProgressTrace out = trace;
  double best = kNoValid;
  for (auto& r : out.rows) {
    r.valid = std::all_of(r.c.begin(), r.c.end(), [tol](double v) { return std::max(0.0, v) <= tol; });
    if (r.valid) best = std::min(best, r.f);
    r.best_valid_f = best;
  }
  return out;
}

void write_summary_csv(std::ostream& os, const SummaryTable& table, bool header) {
  if (header) os << "method,n,mean,q05,q95,reps,no_valid,placeholder\n";
  for (const auto& c : table.cells) {
    os << c.method << ',' << c.checkpoint << ',' << format_double(c.mean) << ','
       << format_double(c.q05) << ',' << format_double(c.q95) << ',' << c.reps << ','
       << c.no_valid << ',' << format_double(table.placeholder) << '\n';
  }
}

namespace {

void write_file(const std::filesystem::path& path, const std::function<void(std::ostream&)>& body) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw Error("cannot open '" + path.string() + "' for writing");
  body(os);
  if (!os) throw Error("failed writing '" + path.string() + "'");
}

}  // namespace

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  const std::string label(method_name(spec.method));
  if (!spec.output.empty()) std::filesystem::create_directories(spec.output);

  struct Slot {
    std::optional<ProgressTrace> trace;
    std::string error;
  };
  std::vector<Slot> slots(spec.reps);
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= spec.reps) return;
      try {
        Problem problem = spec.problem.make();
        ProgressTrace t = run_method(problem, spec.method, spec.budget, spec.base_seed + i);
        if (!spec.output.empty()) {
          write_file(spec.output / ("trace_" + label + "_rep" + std::to_string(i) + ".csv"),
                     [&](std::ostream& os) { write_trace_csv(os, i, t); });
        }
        slots[i].trace = std::move(t);
      } catch (const std::exception& ex) {
        slots[i].error = ex.what();
      }
    }
  };
  const std::size_t n_threads = std::min(spec.workers, spec.reps);
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < n_threads; ++w) pool.emplace_back(worker);
  }

  ExperimentResult result;
  for (std::size_t i = 0; i < spec.reps; ++i) {
    if (slots[i].trace) {
      result.traces.push_back(std::move(*slots[i].trace));
      result.completed.push_back(i);
    } else {
      result.failures.push_back({i, slots[i].error});
    }
  }
  if (result.traces.empty()) throw Error("every rep failed; first error: " + result.failures.front().message);

  result.table = summarize(result.traces, spec.checkpoints, label, spec.placeholder);
  if (spec.method == Method::SANN) {
    std::vector<ProgressTrace> relaxed;
    for (const auto& t : result.traces) relaxed.push_back(relaxed_view(t, 1e-3));
    result.relaxed = summarize(relaxed, spec.checkpoints, label + "-relaxed", spec.placeholder);
  }
  if (!spec.output.empty()) {
    write_file(spec.output / ("summary_" + label + ".csv"), [&](std::ostream& os) {
      write_summary_csv(os, result.table);
      if (result.relaxed) write_summary_csv(os, *result.relaxed, false);
    });
  }
  return result;
}

}  // namespace albo
