#include "albo/trace.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>

#include "albo/errors.hpp"

namespace albo {

void ProgressTrace::append(const Evaluation& e, const Vector& lambda, double rho, std::size_t k,
                           std::string decision) {
  TraceRow row;
  row.n = rows.size() + 1;
  row.x = e.x;
  row.f = e.f;
  row.c = e.c;
  row.valid = e.valid();
  const double prev = rows.empty() ? kNoValid : rows.back().best_valid_f;
  row.best_valid_f = row.valid ? std::min(prev, e.f) : prev;
  row.lambda = lambda;
  row.rho = rho;
  row.k = k;
  row.decision = std::move(decision);
  rows.push_back(std::move(row));
}

double ProgressTrace::best_valid_at(std::size_t n) const {
  if (n == 0 || n > rows.size())
    throw InvalidArgument("best_valid_at: checkpoint " + std::to_string(n) +
                          " beyond trace of length " + std::to_string(rows.size()));
  return rows[n - 1].best_valid_f;
}

std::string trace_csv_header(std::size_t dim, std::size_t m) {
  std::string h = "rep,n";
  for (std::size_t i = 1; i <= dim; ++i) h += ",x" + std::to_string(i);
  h += ",f";
  for (std::size_t j = 1; j <= m; ++j) h += ",c" + std::to_string(j);
  h += ",valid,best_valid_f";
  for (std::size_t j = 1; j <= m; ++j) h += ",lambda" + std::to_string(j);
  h += ",rho,k,decision";
  return h;
}

void write_trace_csv(std::ostream& os, std::size_t rep, const ProgressTrace& trace) {
  os << trace_csv_header(trace.dim, trace.constraints) << '\n';
  for (const auto& r : trace.rows) {
    os << rep << ',' << r.n;
    for (double v : r.x) os << ',' << format_double(v);
    os << ',' << format_double(r.f);
    for (double v : r.c) os << ',' << format_double(v);
    os << ',' << (r.valid ? 1 : 0) << ',' << format_double(r.best_valid_f);
    for (double v : r.lambda) os << ',' << format_double(v);
    os << ',' << format_double(r.rho) << ',' << r.k << ',' << r.decision << '\n';
  }
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double need_double(const std::string& s, std::size_t line_no) {
  const auto v = parse_double(s);
  if (!v) throw InvalidArgument("trace csv line " + std::to_string(line_no) + ": bad number '" + s + "'");
  return *v;
}

std::size_t need_index(const std::string& s, std::size_t line_no) {
  const double v = need_double(s, line_no);
  if (v < 0 || v != static_cast<double>(static_cast<std::size_t>(v)))
    throw InvalidArgument("trace csv line " + std::to_string(line_no) + ": bad index '" + s + "'");
  return static_cast<std::size_t>(v);
}

}  // namespace

std::vector<RepTrace> read_trace_csv(std::istream& is) {
  std::string line;
  std::size_t line_no = 0;
  std::size_t dim = 0;
  std::size_t m = 0;
  std::vector<RepTrace> out;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() >= 2 && cells[0] == "rep") {
      dim = static_cast<std::size_t>(std::count_if(cells.begin(), cells.end(), [](const auto& c) {
        return c.size() > 1 && c[0] == 'x';
      }));
      m = static_cast<std::size_t>(std::count_if(cells.begin(), cells.end(), [](const auto& c) {
        return c.size() > 1 && c[0] == 'c';
      }));
      if (line != trace_csv_header(dim, m))
        throw InvalidArgument("trace csv line " + std::to_string(line_no) + ": unexpected header");
      continue;
    }
    if (dim == 0) throw InvalidArgument("trace csv: data before header");
    const std::size_t expected = 2 + dim + 1 + m + 2 + m + 3;
    if (cells.size() != expected)
      throw InvalidArgument("trace csv line " + std::to_string(line_no) + ": expected " +
                            std::to_string(expected) + " fields");
    std::size_t i = 0;
    const std::size_t rep = need_index(cells[i++], line_no);
    TraceRow r;
    r.n = need_index(cells[i++], line_no);
    for (std::size_t k = 0; k < dim; ++k) r.x.push_back(need_double(cells[i++], line_no));
    r.f = need_double(cells[i++], line_no);
    for (std::size_t j = 0; j < m; ++j) r.c.push_back(need_double(cells[i++], line_no));
    const std::string& valid = cells[i++];
    if (valid != "0" && valid != "1")
      throw InvalidArgument("trace csv line " + std::to_string(line_no) + ": valid must be 0/1");
    r.valid = valid == "1";
    r.best_valid_f = need_double(cells[i++], line_no);
    for (std::size_t j = 0; j < m; ++j) r.lambda.push_back(need_double(cells[i++], line_no));
    r.rho = need_double(cells[i++], line_no);
    r.k = need_index(cells[i++], line_no);
    r.decision = cells[i++];

    if (out.empty() || out.back().rep != rep || out.back().trace.dim != dim) {
      out.push_back(RepTrace{rep, ProgressTrace{dim, m, {}}});
    }
    auto& trace = out.back().trace;
    if (r.n != trace.rows.size() + 1)
      throw InvalidArgument("trace csv line " + std::to_string(line_no) + ": rows out of order");
    trace.rows.push_back(std::move(r));
  }
  return out;
}

}  // namespace albo
