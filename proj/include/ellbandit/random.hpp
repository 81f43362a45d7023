#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace ellbandit {

using Rng = std::mt19937_64;

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Seed for run `index` of an experiment. `stream` separates independent
// consumers within one run (noise vs. policy randomization).
constexpr std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t index,
                                    std::uint64_t stream = 0) {
  return splitmix64(splitmix64(splitmix64(base_seed) ^ index) ^ (stream * 0xD1B54A32D192ED03ULL));
}

inline Eigen::VectorXd standard_normal_vector(Eigen::Index d, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd g(d);
  for (Eigen::Index i = 0; i < d; ++i) g[i] = gauss(rng);
  return g;
}

}  // namespace ellbandit
