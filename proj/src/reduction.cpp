#include "ellbandit/reduction.hpp"

#include <cmath>

#include "ellbandit/e2tc.hpp"
#include "ellbandit/errors.hpp"

namespace ellbandit {

ReducedPolicy::ReducedPolicy(std::unique_ptr<EtcPolicy> inner, VectorXd center, std::size_t horizon)
    : inner_(std::move(inner)), c_(std::move(center)), horizon_(horizon) {
  require(inner_ != nullptr, "ReducedPolicy: inner policy is required");
  require(horizon_ >= 1, "ReducedPolicy: horizon must be >= 1");
}

const Eigen::VectorXd& ReducedPolicy::next_action() {
  require(t_ < horizon_, "ReducedPolicy: next_action called past the horizon");
  require(!awaiting_reward_, "ReducedPolicy: previous action has not been observed");
  awaiting_reward_ = true;
  feeding_inner_ = false;

  if (inner_->is_committed()) {
    if (!committed_x_) committed_x_ = c_ + inner_->commit_action();
    return *committed_x_;
  }
  const std::size_t pairs = horizon_ / 2;
  if (t_ % 2 == 0 || t_ / 2 >= pairs) {
    // First half of a pair, or the unpaired last round of an odd horizon.
    return c_;
  }
  action_ = c_ + inner_->next_action();
  feeding_inner_ = true;
  return action_;
}

void ReducedPolicy::observe(double reward) {
  require(awaiting_reward_, "ReducedPolicy: observe called without a pending action");
  awaiting_reward_ = false;
  ++t_;
  if (feeding_inner_) {
    inner_->observe(reward - *pending_);
    ++inner_observations_;
    pending_.reset();
  } else if (!inner_->is_committed()) {
    pending_ = reward;
  }
}

const Eigen::VectorXd& ReducedPolicy::commit_action() const {
  require(inner_->is_committed(), "ReducedPolicy: inner policy has not committed");
  if (!committed_x_) committed_x_ = c_ + inner_->commit_action();
  return *committed_x_;
}

std::string ReducedPolicy::name() const { return "reduced_" + inner_->name(); }

PolicyStats ReducedPolicy::stats() const {
  PolicyStats s = inner_->stats();
  // Inner counts rounds in pairs.
  if (s.warmup_length) *s.warmup_length *= 2;
  if (s.commit_step) *s.commit_step *= 2;
  return s;
}

std::unique_ptr<ReducedPolicy> make_reduced_e2tc(const std::shared_ptr<const EllipsoidSet>& set, double alpha,
                                                 double sigma, std::size_t horizon) {
  require(set != nullptr, "make_reduced_e2tc: action set is required");
  require(horizon >= 2, "make_reduced_e2tc: horizon must be >= 2 to form one pair");
  auto centered = std::make_shared<const EllipsoidSet>(set->centered());
  E2tcConfig cfg{centered, alpha, sigma * std::sqrt(2.0), horizon / 2};
  auto inner = std::make_unique<E2tcPolicy>(std::move(cfg));
  return std::make_unique<ReducedPolicy>(std::move(inner), set->center(), horizon);
}

}  // namespace ellbandit
