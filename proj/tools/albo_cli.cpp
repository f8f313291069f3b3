// albo: run, benchmark and summarize surrogate-assisted augmented Lagrangian
// optimization on the toy problem or an external line-protocol blackbox.
//
// Exit codes: 0 success, 1 usage error, 2 blackbox protocol failure,
// 3 numerical failure.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <regex>
#include <sstream>

#include "albo/errors.hpp"
#include "albo/harness.hpp"
#include "albo/optimizer.hpp"
#include "albo/simd/dispatch.hpp"

namespace {

constexpr int kUsage = 1;
constexpr int kBlackbox = 2;
constexpr int kNumerical = 3;

struct ProblemFlags {
  std::string problem = "toy";
  std::string blackbox_cmd;
  std::size_t dim = 0;
  std::size_t m = 0;
  std::string objective = "blackbox";

  albo::ProblemSpec to_spec() const {
    albo::ProblemSpec s;
    s.id = blackbox_cmd.empty() ? problem : "external";
    s.blackbox_cmd = blackbox_cmd;
    s.dim = dim;
    s.m = m;
    s.objective = objective;
    return s;
  }
};

void add_problem_flags(CLI::App* cmd, ProblemFlags& f) {
  cmd->add_option("--problem", f.problem, "Built-in problem id")->check(CLI::IsMember({"toy", "external"}));
  cmd->add_option("--blackbox-cmd", f.blackbox_cmd, "Shell command of a line-protocol blackbox");
  cmd->add_option("--dim", f.dim, "Input dimension of the external blackbox");
  cmd->add_option("--m", f.m, "Number of constraints of the external blackbox");
  cmd->add_option("--objective", f.objective, "External objective: blackbox or sum (known x1+...+xd)")
      ->check(CLI::IsMember({"blackbox", "sum"}));
}

albo::Method need_method(const std::string& name) {
  const auto m = albo::parse_method(name);
  if (!m) throw CLI::ValidationError("--method", "unknown method '" + name + "'");
  return *m;
}

std::vector<std::size_t> parse_checkpoints(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t pos = 0;
    const unsigned long v = std::stoul(item, &pos);
    if (pos != item.size()) throw CLI::ValidationError("--checkpoints", "bad value '" + item + "'");
    out.push_back(v);
  }
  return out;
}

void print_table(const albo::SummaryTable& t) {
  std::cout << "method      n      mean       5%        95%   no-valid\n";
  for (const auto& c : t.cells) {
    std::printf("%-10s %4zu  %9.4f  %9.4f  %9.4f  %zu/%zu\n", c.method.c_str(), c.checkpoint,
                c.mean, c.q05, c.q95, c.no_valid, c.reps);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Surrogate-assisted augmented Lagrangian optimization for blackbox constraints"};
  app.require_subcommand(1);

  // run
  ProblemFlags run_problem;
  std::string run_method = "EI";
  std::size_t run_budget = 100;
  std::uint64_t run_seed = 0;
  std::string run_out;
  auto* run = app.add_subcommand("run", "One optimization run; writes a trace CSV");
  add_problem_flags(run, run_problem);
  run->add_option("--method", run_method, "EY | EI | EY-nomax | EI-nomax | SANN | OIC-random");
  run->add_option("--budget", run_budget, "Total blackbox evaluations");
  run->add_option("--seed", run_seed, "Random seed");
  run->add_option("--out", run_out, "Trace CSV path (default: stdout)");

  // bench
  ProblemFlags bench_problem;
  std::string bench_method = "EI";
  std::size_t bench_reps = 100;
  std::size_t bench_budget = 100;
  std::uint64_t bench_seed = 0;
  std::string bench_checkpoints = "25,50,100";
  std::string bench_out = "bench_out";
  std::size_t bench_workers = 1;
  double bench_placeholder = 0.0;
  auto* bench = app.add_subcommand("bench", "Monte Carlo experiment over seeds base-seed+i");
  bench->set_config("--config", "", "Flat key=value file; command-line flags override it");
  add_problem_flags(bench, bench_problem);
  bench->add_option("--method", bench_method, "EY | EI | EY-nomax | EI-nomax | SANN | OIC-random");
  bench->add_option("--reps", bench_reps, "Monte Carlo repetitions");
  bench->add_option("--budget", bench_budget, "Evaluations per repetition");
  bench->add_option("--base-seed", bench_seed, "Seed of repetition 0");
  bench->add_option("--checkpoints", bench_checkpoints, "Comma-separated evaluation counts");
  bench->add_option("--out", bench_out, "Output directory");
  bench->add_option("--workers", bench_workers, "Parallel repetitions");
  auto* ph = bench->add_option("--placeholder", bench_placeholder, "Value used for reps without a valid point");

  // table
  std::vector<std::string> table_files;
  std::string table_checkpoints = "25,50,100";
  std::string table_label;
  std::string table_out;
  double table_placeholder = 0.0;
  auto* table = app.add_subcommand("table", "Summarize existing trace CSVs");
  table->add_option("traces", table_files, "Trace CSV files")->required()->check(CLI::ExistingFile);
  table->add_option("--checkpoints", table_checkpoints, "Comma-separated evaluation counts");
  table->add_option("--label", table_label, "Method label (default: from trace_<label>_rep<i>.csv names)");
  table->add_option("--out", table_out, "Summary CSV path (default: stdout)");
  auto* tph = table->add_option("--placeholder", table_placeholder, "Value used for reps without a valid point");

  app.add_flag_callback("--scalar", [] { albo::simd::set_isa(albo::simd::Isa::Scalar); },
                        "Use the scalar reference kernels");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*run) {
      const albo::Method method = need_method(run_method);
      albo::Problem problem = run_problem.to_spec().make();
      const albo::ProgressTrace trace = albo::run_method(problem, method, run_budget, run_seed);
      if (run_out.empty()) {
        albo::write_trace_csv(std::cout, 0, trace);
      } else {
        std::ofstream os(run_out, std::ios::binary | std::ios::trunc);
        if (!os) throw albo::Error("cannot open '" + run_out + "'");
        albo::write_trace_csv(os, 0, trace);
        std::cerr << "best valid f after " << trace.rows.size()
                  << " evaluations: " << trace.rows.back().best_valid_f << "\n";
      }
    } else if (*bench) {
      albo::ExperimentSpec spec;
      spec.problem = bench_problem.to_spec();
      spec.method = need_method(bench_method);
      spec.reps = bench_reps;
      spec.budget = bench_budget;
      spec.base_seed = bench_seed;
      spec.checkpoints = parse_checkpoints(bench_checkpoints);
      spec.output = bench_out;
      spec.workers = bench_workers;
      if (ph->count() > 0) spec.placeholder = bench_placeholder;
      const auto result = albo::run_experiment(spec);
      for (const auto& f : result.failures)
        std::cerr << "warning: rep " << f.rep << " failed: " << f.message << "\n";
      print_table(result.table);
      if (result.relaxed) print_table(*result.relaxed);
    } else if (*table) {
      const auto checkpoints = parse_checkpoints(table_checkpoints);
      const std::regex name_re("trace_(.+)_rep[0-9]+\\.csv");
      std::map<std::string, std::vector<albo::ProgressTrace>> groups;
      for (const auto& file : table_files) {
        std::string label = table_label;
        std::smatch match;
        const std::string base = std::filesystem::path(file).filename().string();
        if (label.empty()) label = std::regex_match(base, match, name_re) ? match[1].str() : "all";
        std::ifstream is(file, std::ios::binary);
        for (auto& rt : albo::read_trace_csv(is)) groups[label].push_back(std::move(rt.trace));
      }
      std::ostringstream out;
      bool header = true;
      for (const auto& [label, traces] : groups) {
        std::optional<double> placeholder;
        if (tph->count() > 0) placeholder = table_placeholder;
        albo::write_summary_csv(out, albo::summarize(traces, checkpoints, label, placeholder), header);
        header = false;
      }
      if (table_out.empty()) {
        std::cout << out.str();
      } else {
        std::ofstream os(table_out, std::ios::binary | std::ios::trunc);
        os << out.str();
      }
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const albo::RunAborted& e) {
    std::cerr << "run aborted after " << e.partial_trace().rows.size() << " evaluations: " << e.what() << "\n";
    return e.cause() == albo::RunAborted::Cause::Numerical ? kNumerical
           : e.cause() == albo::RunAborted::Cause::Blackbox ? kBlackbox
                                                            : kUsage;
  } catch (const albo::BlackboxError& e) {
    std::cerr << "blackbox error: " << e.what() << "\n";
    return kBlackbox;
  } catch (const albo::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kNumerical;
  } catch (const albo::InvalidArgument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return 0;
}
