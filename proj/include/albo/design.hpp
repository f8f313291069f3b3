#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "albo/problems.hpp"

namespace albo {

/// Maximin Latin hypercube: the best (largest minimum pairwise distance, in
/// unit-cube coordinates) of `tries` random Latin hypercubes, mapped into
/// `bounds`. Deterministic per seed.
std::vector<Vector> initial_design(const Hyperrectangle& bounds, std::size_t n_init,
                                   std::uint64_t seed, std::size_t tries = 100);

/// Smallest pairwise Euclidean distance of a point set.
double min_pairwise_distance(std::span<const Vector> points);

/// Objective-improving candidates, stored row-major.
struct CandidateSet {
  std::size_t dim = 0;
  std::vector<double> points;    // size() * dim
  std::vector<double> f_values;  // known objective at each point
  std::size_t proposals = 0;     // uniform draws consumed
  bool truncated = false;        // acceptance too rare to fill the set

  std::size_t size() const noexcept { return f_values.size(); }
  std::span<const double> point(std::size_t i) const { return {points.data() + i * dim, dim}; }
};

/// Rejection-samples uniform points of `bounds` with f(x) < f_star_min until
/// n_cand are accepted. Gives up (truncated = true) once at least 1e6 draws
/// have been made with an acceptance rate below 1e-4. f_star_min = +inf
/// yields plain uniform candidates.
CandidateSet gen_oic_candidates(const Hyperrectangle& bounds, const Objective& f,
                                double f_star_min, std::size_t n_cand, std::uint64_t seed);

/// n_cand uniform points of `bounds` (used when f is not known).
CandidateSet uniform_candidates(const Hyperrectangle& bounds, std::size_t n_cand,
                                std::uint64_t seed);

}  // namespace albo
