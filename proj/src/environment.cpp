#include "ellbandit/environment.hpp"

#include <cstdint>
#include <cstring>
#include <unordered_map>

#include "ellbandit/errors.hpp"

namespace ellbandit {

double NoiseModel::sample(Rng& rng) const {
  if (scale == 0.0) return 0.0;
  switch (kind) {
    case NoiseKind::Gaussian: {
      std::normal_distribution<double> gauss(0.0, scale);
      return gauss(rng);
    }
    case NoiseKind::Rademacher: {
      std::bernoulli_distribution coin(0.5);
      return coin(rng) ? scale : -scale;
    }
    case NoiseKind::Uniform: {
      std::uniform_real_distribution<double> unif(-scale, scale);
      return unif(rng);
    }
  }
  return 0.0;
}

NoiseKind parse_noise_kind(std::string_view name) {
  if (name == "gaussian") return NoiseKind::Gaussian;
  if (name == "rademacher") return NoiseKind::Rademacher;
  if (name == "uniform") return NoiseKind::Uniform;
  throw ConfigError("unknown noise model '" + std::string(name) + "'");
}

std::string to_string(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::Gaussian: return "gaussian";
    case NoiseKind::Rademacher: return "rademacher";
    case NoiseKind::Uniform: return "uniform";
  }
  return "unknown";
}

double pull(const BanditInstance& inst, const VectorXd& x, Rng& rng) {
  require(x.size() == inst.theta.size(), "pull: dimension mismatch");
  return x.dot(inst.theta) + inst.noise.sample(rng);
}

double instantaneous_regret(const BanditInstance& inst, const EllipsoidSet& set, const VectorXd& x) {
  require(membership(set, x), "instantaneous_regret: action is not feasible");
  return inst.theta.dot(optimal_action(set, inst.theta) - x);
}

std::vector<std::size_t> checkpoint_steps(std::size_t horizon) {
  std::vector<std::size_t> steps;
  for (std::size_t s = 1; s <= horizon; s *= 2) {
    steps.push_back(s);
    if (s > horizon / 2) break;
  }
  if (horizon > 0 && (steps.empty() || steps.back() != horizon)) steps.push_back(horizon);
  return steps;
}

namespace {

// Remembers actions already verified feasible, keyed by where the policy
// keeps them. Policies that replay a few stored actions then pay one memcmp
// per round instead of a triangular solve or a hash over d entries.
class FeasibilityCache {
 public:
  explicit FeasibilityCache(const EllipsoidSet& set) : set_(set) {}

  bool feasible(const VectorXd& x) {
    const auto bytes = static_cast<std::size_t>(x.size()) * sizeof(double);
    auto it = seen_.find(x.data());
    if (it != seen_.end() && it->second.size() == x.size() &&
        std::memcmp(it->second.data(), x.data(), bytes) == 0) {
      return true;
    }
    if (!membership(set_, x)) return false;
    if (it != seen_.end()) {
      it->second = x;
    } else {
      if (seen_.size() >= kMaxEntries) seen_.clear();
      seen_.emplace(x.data(), x);
    }
    return true;
  }

 private:
  static constexpr std::size_t kMaxEntries = 4096;

  const EllipsoidSet& set_;
  std::unordered_map<const double*, VectorXd> seen_;
};
}  // namespace

RegretTrace run_episode(Policy& policy, const BanditInstance& inst, const EllipsoidSet& set,
                        std::size_t horizon, Rng& rng, TraceDetail detail) {
  require(horizon >= 1, "run_episode: horizon must be >= 1");
  require(inst.theta.size() == set.dim(), "run_episode: theta dimension does not match action set");

  // θᵀx*(θ) = θᵀc + ‖θ‖_A, valid for θ = 0 as well.
  const double best = inst.theta.dot(set.center()) + set.anorm(inst.theta);
  const std::vector<std::size_t> marks = checkpoint_steps(horizon);

  RegretTrace trace;
  trace.horizon = horizon;
  trace.checkpoints.reserve(marks.size());
  if (detail == TraceDetail::Full) trace.steps.reserve(horizon);

  FeasibilityCache cache(set);
  std::size_t next_mark = 0;
  double cumulative = 0.0;
  for (std::size_t t = 0; t < horizon; ++t) {
    const VectorXd& x = policy.next_action();
    if (x.size() != set.dim() || !cache.feasible(x)) {
      throw PolicyViolation(policy.name() + " played an infeasible action at step " + std::to_string(t));
    }
    const double value = x.dot(inst.theta);
    const double reward = value + inst.noise.sample(rng);
    const double regret = best - value;
    cumulative += regret;
    if (detail == TraceDetail::Full) trace.steps.push_back({t, x, reward, regret, cumulative});
    policy.observe(reward);
    if (next_mark < marks.size() && marks[next_mark] == t + 1) {
      trace.checkpoints.push_back({t + 1, cumulative});
      ++next_mark;
    }
  }
  trace.total_regret = cumulative;
  trace.stats = policy.stats();
  return trace;
}

}  // namespace ellbandit
