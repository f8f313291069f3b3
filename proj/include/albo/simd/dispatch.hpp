#pragma once

#include <cstddef>
#include <span>
#include <string_view>

#include "albo/simd/kernels.hpp"

namespace albo::simd {

enum class Isa { Scalar, Avx2 };

/// Best ISA supported by both the build and the running CPU.
Isa detect_isa();

/// Currently active ISA. Initialized from ALBO_SIMD ("scalar" or "avx2") when
/// set, otherwise from detect_isa().
Isa active_isa();

/// Force a variant. Returns false (and changes nothing) when the requested
/// ISA is not available. Not thread-safe against concurrent kernel calls.
bool set_isa(Isa isa);

std::string_view isa_name(Isa isa);

// Dispatching entry points.

/// Sum of a[i]*b[i].
double dot(std::span<const double> a, std::span<const double> b);

/// out[i] = sum_k (cols[k*n + i] - x[k])^2 for a column-major n x d design.
void sq_dists(std::span<const double> cols, std::size_t n, std::size_t d,
              std::span<const double> x, std::span<double> out);

/// out[i] = exp(-sq[i] * inv_two_ell_sq). The exponential itself is the
/// libm one in both variants so results agree to rounding of the argument.
void se_kernel(std::span<const double> sq, double inv_two_ell_sq, std::span<double> out);

ImprovementSums composite_improvement(const CompositeDraws& in, const ObjectiveDraws& fz,
                                      double y_min);

}  // namespace albo::simd
