#include "albo/simd/dispatch.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace albo::simd {

namespace {

bool cpu_has_avx2() {
#if defined(ALBO_BUILD_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa initial_isa() {
  const Isa best = detect_isa();
  if (const char* env = std::getenv("ALBO_SIMD")) {
    const std::string v(env);
    if (v == "scalar") return Isa::Scalar;
    if (v == "avx2" && best == Isa::Avx2) return Isa::Avx2;
  }
  return best;
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{initial_isa()};
  return isa;
}

}  // namespace

Isa detect_isa() { return cpu_has_avx2() ? Isa::Avx2 : Isa::Scalar; }

Isa active_isa() { return current().load(std::memory_order_relaxed); }

bool set_isa(Isa isa) {
  if (isa == Isa::Avx2 && detect_isa() != Isa::Avx2) return false;
  current().store(isa, std::memory_order_relaxed);
  return true;
}

std::string_view isa_name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

#if defined(ALBO_BUILD_AVX2)
#define ALBO_DISPATCH(fn, ...)                                          \
  return active_isa() == Isa::Avx2 ? avx2::fn(__VA_ARGS__) : scalar::fn(__VA_ARGS__)
#else
#define ALBO_DISPATCH(fn, ...) return scalar::fn(__VA_ARGS__)
#endif

double dot(std::span<const double> a, std::span<const double> b) { ALBO_DISPATCH(dot, a, b); }

void sq_dists(std::span<const double> cols, std::size_t n, std::size_t d,
              std::span<const double> x, std::span<double> out) {
  ALBO_DISPATCH(sq_dists, cols, n, d, x, out);
}

void se_kernel(std::span<const double> sq, double inv_two_ell_sq, std::span<double> out) {
  ALBO_DISPATCH(se_kernel, sq, inv_two_ell_sq, out);
}

ImprovementSums composite_improvement(const CompositeDraws& in, const ObjectiveDraws& fz,
                                      double y_min) {
  ALBO_DISPATCH(composite_improvement, in, fz, y_min);
}

#undef ALBO_DISPATCH

}  // namespace albo::simd
