#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "albo/gp.hpp"
#include "albo/problems.hpp"

namespace support {

inline std::vector<double> uniform_points(std::size_t n, std::size_t d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> out(n * d);
  for (double& v : out) v = u(rng);
  return out;
}

// Toy-problem design with the first constraint as response.
inline albo::gp::DesignSet toy_design(std::size_t n, std::uint64_t seed) {
  const auto pts = uniform_points(n, 2, seed);
  albo::gp::DesignSet d(2);
  for (std::size_t i = 0; i < n; ++i) {
    std::span<const double> x(pts.data() + 2 * i, 2);
    d.add(x, albo::toy::constraint1(x));
  }
  return d;
}

// Mean and standard error of a sample.
struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

template <class F>
MeanSe monte_carlo(std::size_t draws, std::uint64_t seed, F&& g) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z(0.0, 1.0);
  double mean = 0.0, m2 = 0.0;  // Welford
  for (std::size_t i = 0; i < draws; ++i) {
    const double v = g(z(rng));
    const double delta = v - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (v - mean);
  }
  const double n = static_cast<double>(draws);
  return {mean, std::sqrt(m2 / (n - 1.0) / n)};
}

}  // namespace support
