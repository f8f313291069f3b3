#include "albo/design.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "albo/errors.hpp"

namespace albo {

namespace {

constexpr std::size_t kMinProposalsBeforeGivingUp = 1'000'000;
constexpr double kMinAcceptanceRate = 1e-4;

std::vector<Vector> random_lhs(std::size_t n, std::size_t d, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<Vector> pts(n, Vector(d));
  std::vector<std::size_t> perm(n);
  for (std::size_t k = 0; k < d; ++k) {
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    for (std::size_t i = 0; i < n; ++i)
      pts[i][k] = (static_cast<double>(perm[i]) + unif(rng)) / static_cast<double>(n);
  }
  return pts;
}

}  // namespace

double min_pairwise_distance(std::span<const Vector> points) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < points[i].size(); ++k)
        s += (points[i][k] - points[j][k]) * (points[i][k] - points[j][k]);
      best = std::min(best, std::sqrt(s));
    }
  }
  return best;
}

std::vector<Vector> initial_design(const Hyperrectangle& bounds, std::size_t n_init,
                                   std::uint64_t seed, std::size_t tries) {
  bounds.validate();
  if (n_init < 2) throw InvalidArgument("initial_design: need at least two points");
  if (tries == 0) tries = 1;
  std::mt19937_64 rng(seed);
  std::vector<Vector> best;
  double best_dist = -1.0;
  for (std::size_t t = 0; t < tries; ++t) {
    auto pts = random_lhs(n_init, bounds.dim(), rng);
    const double dist = min_pairwise_distance(pts);
    if (dist > best_dist) {
      best_dist = dist;
      best = std::move(pts);
    }
  }
  for (auto& p : best) p = bounds.from_unit(p);
  return best;
}

CandidateSet gen_oic_candidates(const Hyperrectangle& bounds, const Objective& f,
                                double f_star_min, std::size_t n_cand, std::uint64_t seed) {
  bounds.validate();
  const std::size_t d = bounds.dim();
  CandidateSet out;
  out.dim = d;
  out.points.reserve(n_cand * d);
  out.f_values.reserve(n_cand);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Vector x(d);
  while (out.size() < n_cand) {
    if (out.proposals >= kMinProposalsBeforeGivingUp &&
        static_cast<double>(out.size()) < kMinAcceptanceRate * static_cast<double>(out.proposals)) {
      out.truncated = true;
      break;
    }
    for (std::size_t k = 0; k < d; ++k)
      x[k] = bounds.lower[k] + unif(rng) * (bounds.upper[k] - bounds.lower[k]);
    ++out.proposals;
    const double fx = f(x);
    if (fx < f_star_min) {
      out.points.insert(out.points.end(), x.begin(), x.end());
      out.f_values.push_back(fx);
    }
  }
  return out;
}

CandidateSet uniform_candidates(const Hyperrectangle& bounds, std::size_t n_cand,
                                std::uint64_t seed) {
  bounds.validate();
  const std::size_t d = bounds.dim();
  CandidateSet out;
  out.dim = d;
  out.points.resize(n_cand * d);
  out.f_values.assign(n_cand, std::numeric_limits<double>::quiet_NaN());
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (std::size_t i = 0; i < n_cand; ++i) {
    for (std::size_t k = 0; k < d; ++k)
      out.points[i * d + k] = bounds.lower[k] + unif(rng) * (bounds.upper[k] - bounds.lower[k]);
  }
  out.proposals = n_cand;
  return out;
}

}  // namespace albo
