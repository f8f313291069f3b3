#pragma once

#include <stdexcept>
#include <string>

namespace albo {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad arguments or violated preconditions.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Ill-conditioned linear algebra that jitter could not rescue.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// A blackbox returned something unusable (non-finite values, wrong arity,
/// a dead or silent child process). Carries the raw output when available.
class BlackboxError : public Error {
 public:
  BlackboxError(const std::string& what, std::string raw = {})
      : Error(raw.empty() ? what : what + " [raw: " + raw + "]"), raw_(std::move(raw)) {}
  const std::string& raw_output() const noexcept { return raw_; }

 private:
  std::string raw_;
};

}  // namespace albo
