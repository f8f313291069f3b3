#pragma once

// Gaussian process regression on the unit cube: isotropic squared-exponential
// correlation, constant-zero prior mean on standardized responses, Cholesky
// factorization with jitter escalation, rank-one design augmentation, and a
// profile-likelihood lengthscale search.

#include <Eigen/Core>
#include <cstddef>
#include <span>
#include <vector>

namespace albo::gp {

/// Training inputs (row-major, each in [0,1]^d) and scalar responses.
class DesignSet {
 public:
  explicit DesignSet(std::size_t dim);

  /// Appends a pair. Throws InvalidArgument for wrong arity, inputs outside
  /// [0,1]^d, non-finite values, or an input within 1e-12 of an existing one.
  void add(std::span<const double> x, double y);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return responses_.size(); }
  bool empty() const noexcept { return responses_.empty(); }

  std::span<const double> input(std::size_t i) const {
    return {inputs_.data() + i * dim_, dim_};
  }
  std::span<const double> inputs() const noexcept { return inputs_; }
  std::span<const double> responses() const noexcept { return responses_; }

  /// True when x lies within 1e-12 (Chebyshev) of a stored input.
  bool contains(std::span<const double> x) const;

 private:
  std::size_t dim_;
  std::vector<double> inputs_;
  std::vector<double> responses_;
};

struct GPHyper {
  double lengthscale = 0.1;  // k(r) = exp(-r^2 / (2 lengthscale^2))
  double nugget = 1e-6;      // diagonal term, in units of the prior variance
  double scale = 1.0;        // prior variance of the standardized process

  /// Throws InvalidArgument unless lengthscale > 0, scale > 0, nugget >= 0.
  void validate() const;
};

struct PredictiveDistribution {
  double mean = 0.0;
  double variance = 0.0;
};

struct Interval {
  double low = 1e-2;
  double high = 10.0;
};

/// Immutable fitted surrogate. Copies are cheap enough at desk scale and all
/// const members are safe to call concurrently.
class GPSurrogate {
 public:
  const DesignSet& design() const noexcept { return design_; }
  const GPHyper& hypers() const noexcept { return hypers_; }
  std::size_t dim() const noexcept { return design_.dim(); }
  std::size_t size() const noexcept { return design_.size(); }

  /// Lower Cholesky factor of R + (nugget + jitter) I, R the correlation matrix.
  const Eigen::MatrixXd& factor() const noexcept { return chol_; }
  double jitter() const noexcept { return jitter_; }

  double response_mean() const noexcept { return y_mean_; }
  double response_sd() const noexcept { return y_sd_; }

  PredictiveDistribution predict(std::span<const double> x) const;

  /// Predicts at `count` row-major points. `mean` and `variance` must hold
  /// `count` entries each.
  void predict_batch(std::span<const double> points, std::size_t count, std::span<double> mean,
                     std::span<double> variance) const;

  /// Gaussian log marginal likelihood of the standardized responses under
  /// the current hyperparameters.
  double log_likelihood() const;

 private:
  friend GPSurrogate fit_gp(DesignSet design, const GPHyper& hypers);
  friend GPSurrogate update_gp(const GPSurrogate& s, std::span<const double> x, double y);

  GPSurrogate(DesignSet design, GPHyper hypers) : design_(std::move(design)), hypers_(hypers) {}

  void refresh_columns();
  void refresh_weights();

  DesignSet design_;
  GPHyper hypers_;
  std::vector<double> cols_;  // column-major copy of the inputs
  Eigen::MatrixXd chol_;
  Eigen::VectorXd alpha_;     // C^{-1} y_std
  Eigen::VectorXd y_std_;
  double jitter_ = 0.0;
  double y_mean_ = 0.0;
  double y_sd_ = 1.0;
};

/// Factorizes the design. Throws InvalidArgument for an empty design or
/// invalid hypers and NumericalError when jitter up to 1e-2 does not help.
GPSurrogate fit_gp(DesignSet design, const GPHyper& hypers);

/// Adds one pair with a rank-one extension of the Cholesky factor, O(n^2).
/// Throws InvalidArgument when x duplicates a design input.
GPSurrogate update_gp(const GPSurrogate& s, std::span<const double> x, double y);

/// Golden-section search over log-lengthscale within `bounds` on the
/// scale-profiled likelihood. Returns hypers whose log-likelihood (via
/// log_likelihood on a refit) is never below the incoming one; with fewer
/// than two points the incoming hypers come back unchanged.
GPHyper mle_lengthscale(const GPSurrogate& s, Interval bounds = {});

/// Log-likelihood of `design` under `hypers`, the routine both the search
/// and GPSurrogate::log_likelihood use.
double log_likelihood(const DesignSet& design, const GPHyper& hypers);

}  // namespace albo::gp
