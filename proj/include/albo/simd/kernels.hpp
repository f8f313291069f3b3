#pragma once

// Data-parallel inner loops used by the GP surrogate and the Monte Carlo
// acquisition. Every kernel has a portable scalar reference and, where the
// build and the CPU allow it, an AVX2/FMA variant. The active variant is
// chosen once at startup (see dispatch.hpp); tests compare the two directly.

#include <cstddef>
#include <span>

namespace albo::simd {

/// Parameters of the augmented-Lagrangian composite evaluated on Monte Carlo
/// draws of the constraint surrogates.
struct CompositeDraws {
  std::span<const double> z;       // m*T standard normals, constraint-major
  std::size_t samples = 0;         // T
  std::span<const double> mean;    // m predictive means
  std::span<const double> sd;      // m predictive standard deviations
  std::span<const double> lambda;  // m multipliers
  double inv_two_rho = 0.0;        // 1 / (2 rho)
  double objective = 0.0;          // known (or sampled-mean) objective value
  bool drop_max = false;
};

/// Running sums of the improvement max(0, y_min - y_t) over the draws.
struct ImprovementSums {
  double sum = 0.0;
  double sum_sq = 0.0;
};

/// Optional extra objective draws (unknown-objective case): y_t gets
/// objective_sd * objective_z[t] added.
struct ObjectiveDraws {
  std::span<const double> z;
  double sd = 0.0;
};

namespace scalar {
double dot(std::span<const double> a, std::span<const double> b);
void sq_dists(std::span<const double> cols, std::size_t n, std::size_t d,
              std::span<const double> x, std::span<double> out);
void se_kernel(std::span<const double> sq, double inv_two_ell_sq, std::span<double> out);
ImprovementSums composite_improvement(const CompositeDraws& in, const ObjectiveDraws& fz,
                                      double y_min);
}  // namespace scalar

#if defined(ALBO_BUILD_AVX2)
namespace avx2 {
double dot(std::span<const double> a, std::span<const double> b);
void sq_dists(std::span<const double> cols, std::size_t n, std::size_t d,
              std::span<const double> x, std::span<double> out);
void se_kernel(std::span<const double> sq, double inv_two_ell_sq, std::span<double> out);
ImprovementSums composite_improvement(const CompositeDraws& in, const ObjectiveDraws& fz,
                                      double y_min);
}  // namespace avx2
#endif

}  // namespace albo::simd
