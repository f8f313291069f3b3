#include "albo/gp.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

#include "albo/errors.hpp"
#include "albo/simd/dispatch.hpp"

namespace albo::gp {

namespace {

constexpr double kDistinctTol = 1e-12;
constexpr double kRangeTol = 1e-12;
constexpr double kMinProfileScale = 1e-10;

// Jitter ladder, in units of the prior variance: none, then 1e-8 up to 1e-2.
constexpr double kJitterSteps[] = {0.0, 1e-8, 1e-7, 1e-6, 1e-5, 1e-4, 1e-3, 1e-2};

Eigen::MatrixXd pairwise_sq_dists(const DesignSet& design) {
  const std::size_t n = design.size();
  Eigen::MatrixXd d2(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    d2(i, i) = 0.0;
    const auto xi = design.input(i);
    for (std::size_t j = 0; j < i; ++j) {
      const auto xj = design.input(j);
      double s = 0.0;
      for (std::size_t k = 0; k < design.dim(); ++k) s += (xi[k] - xj[k]) * (xi[k] - xj[k]);
      d2(i, j) = d2(j, i) = s;
    }
  }
  return d2;
}

struct Factorization {
  Eigen::MatrixXd lower;
  double jitter = 0.0;
};

// Factorizes exp(-d2 / (2 ell^2)) + (nugget + jitter) I, escalating jitter.
std::optional<Factorization> factorize(const Eigen::MatrixXd& d2, double lengthscale,
                                       double nugget) {
  const double w = 1.0 / (2.0 * lengthscale * lengthscale);
  const Eigen::MatrixXd corr = (-w * d2.array()).exp().matrix();
  for (double jit : kJitterSteps) {
    Eigen::MatrixXd c = corr;
    c.diagonal().array() += nugget + jit;
    Eigen::LLT<Eigen::MatrixXd> llt(c);
    if (llt.info() != Eigen::Success) continue;
    Eigen::MatrixXd lower = llt.matrixL();
    if ((lower.diagonal().array() <= 0.0).any() || !lower.allFinite()) continue;
    return Factorization{std::move(lower), jit};
  }
  return std::nullopt;
}

struct Standardized {
  Eigen::VectorXd values;
  double mean = 0.0;
  double sd = 1.0;
};

Standardized standardize(std::span<const double> y) {
  const std::size_t n = y.size();
  Standardized out;
  out.values.resize(static_cast<Eigen::Index>(n));
  double mean = 0.0;
  for (double v : y) mean += v;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double v : y) ss += (v - mean) * (v - mean);
  double sd = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;
  if (!(sd > 0.0) || !std::isfinite(sd)) sd = 1.0;
  out.mean = mean;
  out.sd = sd;
  for (std::size_t i = 0; i < n; ++i) out.values(static_cast<Eigen::Index>(i)) = (y[i] - mean) / sd;
  return out;
}

struct LikelihoodTerms {
  double quad = 0.0;    // y' C^{-1} y
  double logdet = 0.0;  // log |C|
  std::size_t n = 0;
};

std::optional<LikelihoodTerms> likelihood_terms(const Eigen::MatrixXd& d2,
                                                const Eigen::VectorXd& ystd, double lengthscale,
                                                double nugget) {
  auto fac = factorize(d2, lengthscale, nugget);
  if (!fac) return std::nullopt;
  const Eigen::VectorXd v = fac->lower.triangularView<Eigen::Lower>().solve(ystd);
  LikelihoodTerms t;
  t.quad = v.squaredNorm();
  t.logdet = 2.0 * fac->lower.diagonal().array().log().sum();
  t.n = static_cast<std::size_t>(ystd.size());
  return t;
}

double loglik_from_terms(const LikelihoodTerms& t, double scale) {
  const double n = static_cast<double>(t.n);
  return -0.5 * t.quad / scale - 0.5 * (n * std::log(scale) + t.logdet) -
         0.5 * n * std::log(2.0 * std::numbers::pi);
}

double profile_scale(const LikelihoodTerms& t) {
  return std::max(t.quad / static_cast<double>(t.n), kMinProfileScale);
}

}  // namespace

// ---------------------------------------------------------------- DesignSet

DesignSet::DesignSet(std::size_t dim) : dim_(dim) {
  if (dim == 0) throw InvalidArgument("DesignSet: dimension must be positive");
}

bool DesignSet::contains(std::span<const double> x) const {
  for (std::size_t i = 0; i < size(); ++i) {
    const auto xi = input(i);
    bool same = true;
    for (std::size_t k = 0; k < dim_ && same; ++k) same = std::abs(xi[k] - x[k]) <= kDistinctTol;
    if (same) return true;
  }
  return false;
}

void DesignSet::add(std::span<const double> x, double y) {
  if (x.size() != dim_) throw InvalidArgument("DesignSet: input has wrong dimension");
  if (!std::isfinite(y)) throw InvalidArgument("DesignSet: non-finite response");
  for (double v : x) {
    if (!std::isfinite(v) || v < -kRangeTol || v > 1.0 + kRangeTol)
      throw InvalidArgument("DesignSet: input outside the unit cube");
  }
  if (contains(x)) throw InvalidArgument("DesignSet: duplicate input");
  inputs_.insert(inputs_.end(), x.begin(), x.end());
  responses_.push_back(y);
}

void GPHyper::validate() const {
  if (!(lengthscale > 0.0) || !std::isfinite(lengthscale))
    throw InvalidArgument("GPHyper: lengthscale must be positive");
  if (!(scale > 0.0) || !std::isfinite(scale)) throw InvalidArgument("GPHyper: scale must be positive");
  if (!(nugget >= 0.0) || !std::isfinite(nugget))
    throw InvalidArgument("GPHyper: nugget must be nonnegative");
}

// ---------------------------------------------------------------- surrogate

void GPSurrogate::refresh_columns() {
  const std::size_t n = design_.size();
  const std::size_t d = design_.dim();
  cols_.resize(n * d);
  for (std::size_t i = 0; i < n; ++i) {
    const auto xi = design_.input(i);
    for (std::size_t k = 0; k < d; ++k) cols_[k * n + i] = xi[k];
  }
}

void GPSurrogate::refresh_weights() {
  auto st = standardize(design_.responses());
  y_mean_ = st.mean;
  y_sd_ = st.sd;
  y_std_ = std::move(st.values);
  alpha_ = chol_.triangularView<Eigen::Lower>().solve(y_std_);
  chol_.triangularView<Eigen::Lower>().transpose().solveInPlace(alpha_);
}

GPSurrogate fit_gp(DesignSet design, const GPHyper& hypers) {
  hypers.validate();
  if (design.empty()) throw InvalidArgument("fit_gp: empty design");
  const Eigen::MatrixXd d2 = pairwise_sq_dists(design);
  auto fac = factorize(d2, hypers.lengthscale, hypers.nugget);
  if (!fac) throw NumericalError("fit_gp: covariance factorization failed at maximum jitter");
  GPSurrogate s(std::move(design), hypers);
  s.chol_ = std::move(fac->lower);
  s.jitter_ = fac->jitter;
  s.refresh_columns();
  s.refresh_weights();
  return s;
}

GPSurrogate update_gp(const GPSurrogate& s, std::span<const double> x, double y) {
  if (s.design_.contains(x)) throw InvalidArgument("update_gp: duplicate input");
  DesignSet design = s.design_;
  design.add(x, y);

  const std::size_t n = s.size();
  const double w = 1.0 / (2.0 * s.hypers_.lengthscale * s.hypers_.lengthscale);
  std::vector<double> sq(n), corr(n);
  simd::sq_dists(s.cols_, n, s.dim(), x, sq);
  simd::se_kernel(sq, w, corr);

  Eigen::VectorXd l = Eigen::Map<const Eigen::VectorXd>(corr.data(), static_cast<Eigen::Index>(n));
  s.chol_.triangularView<Eigen::Lower>().solveInPlace(l);
  const double diag2 = 1.0 + s.hypers_.nugget + s.jitter_ - l.squaredNorm();
  // Loss of positive definiteness at the current jitter: start over.
  if (!(diag2 > 0.0) || !std::isfinite(diag2)) return fit_gp(std::move(design), s.hypers_);

  GPSurrogate out(std::move(design), s.hypers_);
  const auto ni = static_cast<Eigen::Index>(n);
  out.chol_.setZero(ni + 1, ni + 1);
  out.chol_.topLeftCorner(ni, ni) = s.chol_;
  out.chol_.block(ni, 0, 1, ni) = l.transpose();
  out.chol_(ni, ni) = std::sqrt(diag2);
  out.jitter_ = s.jitter_;
  out.refresh_columns();
  out.refresh_weights();
  return out;
}

PredictiveDistribution GPSurrogate::predict(std::span<const double> x) const {
  if (x.size() != dim()) throw InvalidArgument("predict: dimension mismatch");
  PredictiveDistribution p;
  predict_batch(x, 1, std::span<double>(&p.mean, 1), std::span<double>(&p.variance, 1));
  return p;
}

void GPSurrogate::predict_batch(std::span<const double> points, std::size_t count,
                                std::span<double> mean, std::span<double> variance) const {
  const std::size_t n = size();
  const std::size_t d = dim();
  if (points.size() != count * d) throw InvalidArgument("predict_batch: dimension mismatch");
  if (mean.size() < count || variance.size() < count)
    throw InvalidArgument("predict_batch: output too small");
  if (count == 0) return;

  const double w = 1.0 / (2.0 * hypers_.lengthscale * hypers_.lengthscale);
  Eigen::MatrixXd cross(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(count));
  std::vector<double> sq(n);
  for (std::size_t c = 0; c < count; ++c) {
    double* col = cross.col(static_cast<Eigen::Index>(c)).data();
    simd::sq_dists(cols_, n, d, points.subspan(c * d, d), sq);
    simd::se_kernel(sq, w, std::span<double>(col, n));
    mean[c] = simd::dot(std::span<const double>(col, n),
                        std::span<const double>(alpha_.data(), n));
  }
  chol_.triangularView<Eigen::Lower>().solveInPlace(cross);
  const double var_scale = y_sd_ * y_sd_ * hypers_.scale;
  for (std::size_t c = 0; c < count; ++c) {
    const double* v = cross.col(static_cast<Eigen::Index>(c)).data();
    const double q = simd::dot(std::span<const double>(v, n), std::span<const double>(v, n));
    mean[c] = y_mean_ + y_sd_ * mean[c];
    variance[c] = std::max(0.0, var_scale * (1.0 - q));
  }
}

double GPSurrogate::log_likelihood() const { return gp::log_likelihood(design_, hypers_); }

// ---------------------------------------------------------------- likelihood

double log_likelihood(const DesignSet& design, const GPHyper& hypers) {
  hypers.validate();
  if (design.empty()) throw InvalidArgument("log_likelihood: empty design");
  const auto st = standardize(design.responses());
  const auto terms = likelihood_terms(pairwise_sq_dists(design), st.values, hypers.lengthscale,
                                      hypers.nugget);
  if (!terms) return -std::numeric_limits<double>::infinity();
  return loglik_from_terms(*terms, hypers.scale);
}

GPHyper mle_lengthscale(const GPSurrogate& s, Interval bounds) {
  if (!(bounds.low > 0.0) || !(bounds.low < bounds.high))
    throw InvalidArgument("mle_lengthscale: bounds must satisfy 0 < low < high");
  const GPHyper incoming = s.hypers();
  if (s.size() < 2) return incoming;

  const Eigen::MatrixXd d2 = pairwise_sq_dists(s.design());
  const auto st = standardize(s.design().responses());
  const double nugget = incoming.nugget;

  auto profile = [&](double log_ell) {
    const auto t = likelihood_terms(d2, st.values, std::exp(log_ell), nugget);
    if (!t) return -std::numeric_limits<double>::infinity();
    return loglik_from_terms(*t, profile_scale(*t));
  };

  // Coarse grid to bracket the best mode, then golden-section inside it.
  const double lo = std::log(bounds.low);
  const double hi = std::log(bounds.high);
  constexpr int kGrid = 12;
  double best_t = lo;
  double best_v = -std::numeric_limits<double>::infinity();
  int best_i = 0;
  for (int i = 0; i < kGrid; ++i) {
    const double t = lo + (hi - lo) * i / (kGrid - 1);
    const double v = profile(t);
    if (v > best_v) {
      best_v = v;
      best_t = t;
      best_i = i;
    }
  }
  const double step = (hi - lo) / (kGrid - 1);
  double a = std::max(lo, best_t - (best_i > 0 ? step : 0.0));
  double b = std::min(hi, best_t + (best_i < kGrid - 1 ? step : 0.0));
  constexpr double kInvPhi = 0.6180339887498949;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = profile(x1);
  double f2 = profile(x2);
  while (b - a > 1e-4) {
    if (f1 >= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = profile(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = profile(x2);
    }
  }
  for (auto [t, v] : {std::pair{x1, f1}, std::pair{x2, f2}}) {
    if (v > best_v) {
      best_v = v;
      best_t = t;
    }
  }

  // Candidates: the search optimum and the incoming lengthscale, both with
  // their profiled scale. Keep whichever beats the incoming hypers.
  GPHyper best = incoming;
  double best_ll = log_likelihood(s.design(), incoming);
  for (double ell : {std::clamp(std::exp(best_t), bounds.low, bounds.high), incoming.lengthscale}) {
    const auto t = likelihood_terms(d2, st.values, ell, nugget);
    if (!t) continue;
    GPHyper h{ell, nugget, profile_scale(*t)};
    const double ll = log_likelihood(s.design(), h);
    if (ll > best_ll) {
      best_ll = ll;
      best = h;
    }
  }
  return best;
}

}  // namespace albo::gp
