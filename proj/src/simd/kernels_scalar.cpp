#include <algorithm>
#include <cmath>

#include "albo/simd/kernels.hpp"

namespace albo::simd::scalar {

double dot(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

void sq_dists(std::span<const double> cols, std::size_t n, std::size_t d,
              std::span<const double> x, std::span<double> out) {
  std::fill(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(n), 0.0);
  for (std::size_t k = 0; k < d; ++k) {
    const double* col = cols.data() + k * n;
    const double xk = x[k];
    for (std::size_t i = 0; i < n; ++i) {
      const double diff = col[i] - xk;
      out[i] += diff * diff;
    }
  }
}

void se_kernel(std::span<const double> sq, double inv_two_ell_sq, std::span<double> out) {
  for (std::size_t i = 0; i < sq.size(); ++i) out[i] = std::exp(-sq[i] * inv_two_ell_sq);
}

ImprovementSums composite_improvement(const CompositeDraws& in, const ObjectiveDraws& fz,
                                      double y_min) {
  const std::size_t m = in.mean.size();
  const std::size_t T = in.samples;
  ImprovementSums out;
  for (std::size_t t = 0; t < T; ++t) {
    double y = in.objective;
    if (!fz.z.empty()) y += fz.sd * fz.z[t];
    for (std::size_t j = 0; j < m; ++j) {
      const double c = in.mean[j] + in.sd[j] * in.z[j * T + t];
      const double h = in.drop_max ? c : std::max(0.0, c);
      y += in.lambda[j] * c + in.inv_two_rho * h * h;
    }
    const double imp = std::max(0.0, y_min - y);
    out.sum += imp;
    out.sum_sq += imp * imp;
  }
  return out;
}

}  // namespace albo::simd::scalar
