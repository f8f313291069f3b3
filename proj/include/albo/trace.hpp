#pragma once

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "albo/problems.hpp"

namespace albo {

/// Best-valid-objective value of rows that precede the first valid evaluation.
inline constexpr double kNoValid = std::numeric_limits<double>::infinity();

struct TraceRow {
  std::size_t n = 0;  // 1-based evaluation index
  Vector x;
  double f = 0.0;
  Vector c;
  bool valid = false;
  double best_valid_f = kNoValid;
  Vector lambda;
  double rho = 0.0;
  std::size_t k = 0;
  std::string decision;  // init | EY | EI | SANN | OIC
};

/// Per-evaluation history of one run. Every method produces this shape.
struct ProgressTrace {
  std::size_t dim = 0;
  std::size_t constraints = 0;
  std::vector<TraceRow> rows;

  /// Appends a row built from `e`, carrying the running strict-validity best.
  void append(const Evaluation& e, const Vector& lambda, double rho, std::size_t k,
              std::string decision);

  /// best_valid_f after n evaluations (kNoValid if none yet). Throws
  /// InvalidArgument when the trace is shorter than n or n == 0.
  double best_valid_at(std::size_t n) const;
};

/// `rep,n,x1..xd,f,c1..cm,valid,best_valid_f,lambda1..lambdam,rho,k,decision`
std::string trace_csv_header(std::size_t dim, std::size_t m);

/// Writes the header and every row tagged with `rep`. Numbers use shortest
/// round-trip formatting ("inf" marks no valid point yet).
void write_trace_csv(std::ostream& os, std::size_t rep, const ProgressTrace& trace);

struct RepTrace {
  std::size_t rep = 0;
  ProgressTrace trace;
};

/// Parses one file written by write_trace_csv (rows may carry several reps).
/// Throws InvalidArgument on schema violations.
std::vector<RepTrace> read_trace_csv(std::istream& is);

}  // namespace albo
