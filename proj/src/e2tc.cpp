#include "ellbandit/e2tc.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ellbandit/errors.hpp"

namespace ellbandit {

Subphase schedule(std::size_t i, std::size_t d, std::size_t horizon) {
  require(i >= 1 && i < 64, "schedule: subphase index must be in [1, 63]");
  require(d >= 1 && horizon >= 1, "schedule: d and T must be >= 1");
  Subphase sp;
  sp.n = d << (i - 1);
  sp.end = d * ((std::size_t{1} << i) - 1);
  sp.delta = std::min(static_cast<double>(d) * static_cast<double>(sp.n) / static_cast<double>(horizon), 1.0);
  return sp;
}

std::size_t exploration_budget(std::size_t d, double sigma, std::size_t horizon, double b_hat) {
  require(b_hat > 0.0, "exploration_budget: norm estimate must be positive");
  require(sigma >= 0.0, "exploration_budget: sigma must be >= 0");
  const double per_direction = std::ceil(std::sqrt(static_cast<double>(horizon)) / b_hat);
  // Budgets beyond T blocks are truncated by the horizon anyway; the cap keeps
  // the conversion finite for vanishing B̂.
  const double blocks = std::clamp(std::ceil(sigma * per_direction), 1.0, static_cast<double>(horizon));
  return d * static_cast<std::size_t>(blocks);
}

E2tcPolicy::E2tcPolicy(E2tcConfig config)
    : config_(std::move(config)),
      d_(config_.set ? static_cast<std::size_t>(config_.set->dim()) : 1),
      acc_(d_) {
  require(config_.set != nullptr, "E2TC: action set is required");
  require(config_.set->is_centered(), "E2TC: action set must be centered (use the reduction for c != 0)");
  require(config_.alpha > 0.0, "E2TC: alpha must be positive");
  require(config_.sigma >= 0.0, "E2TC: sigma must be >= 0");
  require(config_.horizon >= 1, "E2TC: horizon must be >= 1");
  window_end_ = schedule(1, d_, config_.horizon).end;
}

E2tcPolicy E2tcPolicy::with_known_norm(E2tcConfig config, double known_norm) {
  require(known_norm > 0.0, "oracle ETC: known norm must be positive");
  E2tcPolicy policy(std::move(config));
  policy.subphase_ = 0;
  policy.window_end_ = 0;
  policy.enter_explore(known_norm);
  return policy;
}

const Eigen::VectorXd& E2tcPolicy::next_action() {
  require(t_ < config_.horizon, "E2TC: next_action called past the horizon");
  require(!awaiting_reward_, "E2TC: previous action has not been observed");
  awaiting_reward_ = true;
  if (phase_ == E2tcPhase::Commit) return *commit_x_;
  return config_.set->direction(t_ % d_);
}

void E2tcPolicy::observe(double reward) {
  require(awaiting_reward_, "E2TC: observe called without a pending action");
  awaiting_reward_ = false;
  const std::size_t t = t_++;
  if (phase_ == E2tcPhase::Commit) return;

  acc_.absorb(t % d_, reward);
  if (phase_ == E2tcPhase::Warmup && t_ == window_end_) {
    finish_warmup_window();
  } else if (phase_ == E2tcPhase::Explore && t_ == explore_end_) {
    finish_exploration();
  }
}

void E2tcPolicy::finish_warmup_window() {
  const Subphase sp = schedule(subphase_, d_, config_.horizon);
  const LsEstimate est = ls_from_accumulator(acc_, *config_.set);
  const double threshold = config_.alpha * confidence_width(sp.delta, sp.n, config_.sigma, d_);
  if (est.anorm > threshold) {
    exit_index_ = subphase_;
    enter_explore(est.anorm);
    return;
  }
  ++subphase_;
  window_end_ = schedule(subphase_, d_, config_.horizon).end;
  acc_.reset();
}

void E2tcPolicy::enter_explore(double b_hat) {
  b_hat_ = b_hat;
  n_e_ = exploration_budget(d_, config_.sigma, config_.horizon, b_hat);
  explore_start_ = t_;
  explore_end_ = t_ + *n_e_;
  acc_.reset();
  phase_ = E2tcPhase::Explore;
}

void E2tcPolicy::finish_exploration() {
  const LsEstimate est = ls_from_accumulator(acc_.complete_blocks(), *config_.set);
  theta_hat_ = est.theta_hat;
  // A zero estimate (reachable only under discrete noise) has no greedy
  // action; fall back to the first exploration direction.
  commit_x_ = est.anorm > 0.0 ? optimal_action(*config_.set, est.theta_hat) : config_.set->direction(0);
  commit_step_ = t_;
  phase_ = E2tcPhase::Commit;
}

const Eigen::VectorXd& E2tcPolicy::commit_action() const {
  require(commit_x_.has_value(), "E2TC: policy has not committed yet");
  return *commit_x_;
}

std::size_t E2tcPolicy::warmup_length() const {
  return phase_ == E2tcPhase::Warmup ? t_ : explore_start_;
}

std::string E2tcPolicy::name() const {
  std::ostringstream os;
  if (subphase_ == 0) {
    os << "oracle_etc";
  } else {
    os << "e2tc(" << config_.alpha << ")";
  }
  return os.str();
}

PolicyStats E2tcPolicy::stats() const {
  PolicyStats s;
  s.b_hat = b_hat_;
  s.warmup_length = warmup_length();
  s.exit_index = exit_index_;
  s.explore_budget = n_e_;
  s.commit_step = commit_step_;
  return s;
}

}  // namespace ellbandit
