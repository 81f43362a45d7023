#pragma once

#include <cstddef>
#include <memory>
#include <optional>

#include <Eigen/Dense>

#include "ellbandit/ellipsoid.hpp"
#include "ellbandit/estimation.hpp"
#include "ellbandit/policy.hpp"

namespace ellbandit {

struct E2tcConfig {
  std::shared_ptr<const EllipsoidSet> set;  // must be centered
  double alpha = 3.0;
  double sigma = 1.0;
  std::size_t horizon = 1;
};

// Warm-up subphase i (1-based): n_i = d·2^(i−1) rounds, ending at
// T_i = d·(2^i − 1), tested at confidence δ_i = min(d·n_i/T, 1).
struct Subphase {
  std::size_t n = 0;
  std::size_t end = 0;
  double delta = 1.0;
};

Subphase schedule(std::size_t i, std::size_t d, std::size_t horizon);

// Number of exploration rounds after warm-up: d·σ·⌈√T/B̂⌉ rounded up to a
// multiple of d and floored at d.
std::size_t exploration_budget(std::size_t d, double sigma, std::size_t horizon, double b_hat);

enum class E2tcPhase { Warmup, Explore, Commit };

// Explore-explore-then-commit over a centered ellipsoid.
//
// Warm-up plays the columns of S round-robin in doubling windows and stops at
// the first window whose least-squares estimate satisfies
// ‖θ̂_i‖_A > α·U(δ_i, n_i). Its norm B̂ sizes the exploration phase, after which
// the policy commits to x*(θ̂). If the horizon runs out before a phase ends the
// policy keeps playing round-robin.
class E2tcPolicy final : public EtcPolicy {
 public:
  explicit E2tcPolicy(E2tcConfig config);

  // Skips warm-up and explores with B̂ := known_norm (oracle-norm ablation).
  static E2tcPolicy with_known_norm(E2tcConfig config, double known_norm);

  const Eigen::VectorXd& next_action() override;
  void observe(double reward) override;
  std::string name() const override;
  PolicyStats stats() const override;

  bool is_committed() const override { return phase_ == E2tcPhase::Commit; }
  const Eigen::VectorXd& commit_action() const override;

  E2tcPhase phase() const { return phase_; }
  std::size_t step() const { return t_; }
  std::size_t subphase() const { return subphase_; }
  const std::optional<double>& b_hat() const { return b_hat_; }
  const std::optional<std::size_t>& explore_budget() const { return n_e_; }
  const std::optional<std::size_t>& exit_index() const { return exit_index_; }
  const std::optional<VectorXd>& theta_hat() const { return theta_hat_; }
  // Rounds spent in warm-up; equals the elapsed steps while still warming up.
  std::size_t warmup_length() const;
  const RoundRobinAccumulator& accumulator() const { return acc_; }

 private:
  void finish_warmup_window();
  void enter_explore(double b_hat);
  void finish_exploration();

  E2tcConfig config_;
  std::size_t d_;
  E2tcPhase phase_ = E2tcPhase::Warmup;
  std::size_t t_ = 0;
  bool awaiting_reward_ = false;
  std::size_t subphase_ = 1;
  std::size_t window_end_ = 0;
  std::size_t explore_start_ = 0;
  std::size_t explore_end_ = 0;
  RoundRobinAccumulator acc_;
  std::optional<double> b_hat_;
  std::optional<std::size_t> n_e_;
  std::optional<std::size_t> exit_index_;
  std::optional<VectorXd> theta_hat_;
  std::optional<VectorXd> commit_x_;
  std::optional<std::size_t> commit_step_;
};

}  // namespace ellbandit
