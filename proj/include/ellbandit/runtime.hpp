#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "ellbandit/montecarlo.hpp"

namespace ellbandit {

struct PhaseTiming {
  std::string phase;
  std::size_t steps = 0;
  double seconds = 0.0;
};

struct RuntimeReport {
  std::string policy;
  std::size_t d = 0;
  std::size_t horizon = 0;
  double seconds = 0.0;
  double ns_per_step = 0.0;
  double total_regret = 0.0;
  std::vector<PhaseTiming> phases;  // warmup/explore/commit for E2TC, "all" otherwise
};

// Times one full episode on the unit ball in dimension d with Gaussian noise
// (σ = 1) and a random θ of Euclidean norm `norm`.
RuntimeReport runtime_probe(const PolicySpec& spec, std::size_t d, std::size_t horizon, double norm = 1.0,
                            std::uint64_t seed = 0);

}  // namespace ellbandit
