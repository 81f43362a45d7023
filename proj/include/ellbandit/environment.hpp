#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "ellbandit/ellipsoid.hpp"
#include "ellbandit/policy.hpp"
#include "ellbandit/random.hpp"

namespace ellbandit {

enum class NoiseKind { Gaussian, Rademacher, Uniform };

// Centered noise with variance proxy scale². Gaussian: N(0, scale²);
// Rademacher: ±scale; Uniform: U[−scale, scale].
struct NoiseModel {
  NoiseKind kind = NoiseKind::Gaussian;
  double scale = 1.0;

  double sample(Rng& rng) const;
};

NoiseKind parse_noise_kind(std::string_view name);
std::string to_string(NoiseKind kind);

struct BanditInstance {
  VectorXd theta;
  NoiseModel noise;
};

// xᵀθ + z.
double pull(const BanditInstance& inst, const VectorXd& x, Rng& rng);

// θᵀ(x*(θ) − x). Requires θ ≠ 0 and x feasible.
double instantaneous_regret(const BanditInstance& inst, const EllipsoidSet& set, const VectorXd& x);

struct StepRecord {
  std::size_t t = 0;
  VectorXd action;
  double reward = 0.0;
  double pseudo_regret = 0.0;
  double cumulative = 0.0;
};

struct Checkpoint {
  std::size_t step = 0;  // number of rounds played
  double cum_regret = 0.0;
};

struct RegretTrace {
  std::size_t horizon = 0;
  std::vector<StepRecord> steps;          // empty unless TraceDetail::Full
  std::vector<Checkpoint> checkpoints;    // cumulative regret at geometric steps
  double total_regret = 0.0;
  PolicyStats stats;
};

enum class TraceDetail { Full, Checkpoints };

// {1, 2, 4, ..., 2^k ≤ T} ∪ {T}.
std::vector<std::size_t> checkpoint_steps(std::size_t horizon);

// Plays `horizon` rounds. Every action is checked for feasibility; an
// infeasible one aborts the episode with PolicyViolation. Pseudo-regret uses
// the true θ.
RegretTrace run_episode(Policy& policy, const BanditInstance& inst, const EllipsoidSet& set,
                        std::size_t horizon, Rng& rng, TraceDetail detail = TraceDetail::Full);

}  // namespace ellbandit
