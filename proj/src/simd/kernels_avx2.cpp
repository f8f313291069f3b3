// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.

#include <immintrin.h>

#include <algorithm>
#include <cmath>

#include "albo/simd/kernels.hpp"

namespace albo::simd::avx2 {

namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

}  // namespace

double dot(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size();
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a.data() + i), _mm256_loadu_pd(b.data() + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a.data() + i + 4), _mm256_loadu_pd(b.data() + i + 4),
                           acc1);
  }
  for (; i + 4 <= n; i += 4)
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a.data() + i), _mm256_loadu_pd(b.data() + i), acc0);
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void sq_dists(std::span<const double> cols, std::size_t n, std::size_t d,
              std::span<const double> x, std::span<double> out) {
  std::fill(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(n), 0.0);
  for (std::size_t k = 0; k < d; ++k) {
    const double* col = cols.data() + k * n;
    const __m256d xk = _mm256_set1_pd(x[k]);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
      const __m256d diff = _mm256_sub_pd(_mm256_loadu_pd(col + i), xk);
      _mm256_storeu_pd(out.data() + i, _mm256_fmadd_pd(diff, diff, _mm256_loadu_pd(out.data() + i)));
    }
    for (; i < n; ++i) {
      const double diff = col[i] - x[k];
      out[i] += diff * diff;
    }
  }
}

void se_kernel(std::span<const double> sq, double inv_two_ell_sq, std::span<double> out) {
  const std::size_t n = sq.size();
  const __m256d scale = _mm256_set1_pd(-inv_two_ell_sq);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out.data() + i, _mm256_mul_pd(_mm256_loadu_pd(sq.data() + i), scale));
  for (; i < n; ++i) out[i] = -sq[i] * inv_two_ell_sq;
  for (i = 0; i < n; ++i) out[i] = std::exp(out[i]);
}

ImprovementSums composite_improvement(const CompositeDraws& in, const ObjectiveDraws& fz,
                                      double y_min) {
  const std::size_t m = in.mean.size();
  const std::size_t T = in.samples;
  const __m256d zero = _mm256_setzero_pd();
  const __m256d ymin = _mm256_set1_pd(y_min);
  const __m256d w = _mm256_set1_pd(in.inv_two_rho);
  const __m256d fsd = _mm256_set1_pd(fz.sd);
  const bool has_fz = !fz.z.empty();

  __m256d sum = zero;
  __m256d sum_sq = zero;
  std::size_t t = 0;
  for (; t + 4 <= T; t += 4) {
    __m256d y = _mm256_set1_pd(in.objective);
    if (has_fz) y = _mm256_fmadd_pd(fsd, _mm256_loadu_pd(fz.z.data() + t), y);
    for (std::size_t j = 0; j < m; ++j) {
      const __m256d c = _mm256_fmadd_pd(_mm256_set1_pd(in.sd[j]),
                                        _mm256_loadu_pd(in.z.data() + j * T + t),
                                        _mm256_set1_pd(in.mean[j]));
      const __m256d h = in.drop_max ? c : _mm256_max_pd(zero, c);
      y = _mm256_fmadd_pd(_mm256_set1_pd(in.lambda[j]), c, y);
      y = _mm256_fmadd_pd(_mm256_mul_pd(w, h), h, y);
    }
    const __m256d imp = _mm256_max_pd(zero, _mm256_sub_pd(ymin, y));
    sum = _mm256_add_pd(sum, imp);
    sum_sq = _mm256_fmadd_pd(imp, imp, sum_sq);
  }
  ImprovementSums out{hsum(sum), hsum(sum_sq)};
  for (; t < T; ++t) {
    double y = in.objective;
    if (has_fz) y += fz.sd * fz.z[t];
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

}  // namespace albo::simd::avx2
