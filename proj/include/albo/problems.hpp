#pragma once

#include <chrono>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace albo {

using Vector = std::vector<double>;

/// Bound box B = {x : lower <= x <= upper}.
struct Hyperrectangle {
  Vector lower;
  Vector upper;

  static Hyperrectangle unit(std::size_t dim);

  std::size_t dim() const noexcept { return lower.size(); }
  /// Throws InvalidArgument unless lower < upper componentwise (and finite).
  void validate() const;
  bool contains(std::span<const double> x) const;
  Vector to_unit(std::span<const double> x) const;
  Vector from_unit(std::span<const double> u) const;
};

/// One blackbox call.
struct Evaluation {
  Vector x;
  double f = 0.0;
  Vector c;
  std::size_t index = 0;  // 1-based evaluation counter

  /// Strict validity: every constraint <= 0.
  bool valid() const;
  /// Relaxed validity used only for classical comparators: max(0, c) <= tol.
  bool valid_within(double tol) const;
};

/// Raw output of a blackbox call; `objective` is empty when the blackbox does
/// not report one.
struct BlackboxOutput {
  std::optional<double> objective;
  Vector constraints;
};

class Blackbox {
 public:
  virtual ~Blackbox() = default;
  virtual BlackboxOutput evaluate(std::span<const double> x) = 0;
};

using Objective = std::function<double(std::span<const double>)>;

/// A bound-constrained problem with m blackbox constraints and an objective
/// that is either known in closed form or reported by the blackbox.
class Problem {
 public:
  Problem(std::string name, Hyperrectangle bounds, std::size_t m,
          std::optional<Objective> known_objective, std::shared_ptr<Blackbox> blackbox);

  const std::string& name() const noexcept { return name_; }
  std::size_t dim() const noexcept { return bounds_.dim(); }
  std::size_t constraints() const noexcept { return m_; }
  const Hyperrectangle& bounds() const noexcept { return bounds_; }

  bool objective_known() const noexcept { return known_.has_value(); }
  /// Known objective at x. Throws InvalidArgument when the objective is a blackbox.
  double objective(std::span<const double> x) const;

  /// Runs the blackbox at x. Out-of-bounds x throws InvalidArgument without
  /// touching the counter; non-finite or malformed output throws BlackboxError.
  Evaluation evaluate(std::span<const double> x);

  std::size_t evaluations() const noexcept { return log_.size(); }
  /// Every successful evaluation, in order.
  const std::vector<Evaluation>& log() const noexcept { return log_; }

 private:
  std::string name_;
  Hyperrectangle bounds_;
  std::size_t m_;
  std::optional<Objective> known_;
  std::shared_ptr<Blackbox> blackbox_;
  std::vector<Evaluation> log_;
};

namespace toy {
double objective(std::span<const double> x);
double constraint1(std::span<const double> x);
double constraint2(std::span<const double> x);
}  // namespace toy

/// f(x) = x1 + x2 on [0,1]^2 with one sinusoidal and one disk constraint.
Problem toy_problem();

struct ExternalOptions {
  std::optional<Hyperrectangle> bounds;      // default: unit cube
  std::optional<Objective> known_objective;  // default: objective read from the child
  std::chrono::milliseconds timeout{60000};
};

/// Problem whose evaluations go through a child process speaking the line
/// protocol: one line of `dim` numbers in, one line of m+1 numbers out
/// (objective first). The child is started here and lives as long as the
/// returned Problem (and its copies).
Problem external_blackbox(const std::string& command, std::size_t dim, std::size_t m,
                          ExternalOptions options = {});

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

/// Strict parse of a whole token as a double (accepts "inf"/"nan").
std::optional<double> parse_double(std::string_view token);

}  // namespace albo
