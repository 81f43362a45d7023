#pragma once

#include <cstddef>
#include <memory>
#include <optional>

#include <Eigen/Dense>

#include "ellbandit/ellipsoid.hpp"
#include "ellbandit/policy.hpp"

namespace ellbandit {

// Runs an ETC-type policy built for a centered set X on the translated set
// c + X. Each inner exploration round becomes two outer rounds, c then
// c + x̃, and the inner policy is fed the difference y(c + x̃) − y(c) =
// θᵀx̃ + noise with variance proxy 2σ². Once the inner policy commits, the
// outer policy plays c + x_commit for the rest of the horizon.
class ReducedPolicy final : public EtcPolicy {
 public:
  // `inner` must be tuned for variance proxy 2σ² and horizon ⌊T/2⌋.
  ReducedPolicy(std::unique_ptr<EtcPolicy> inner, VectorXd center, std::size_t horizon);

  const Eigen::VectorXd& next_action() override;
  void observe(double reward) override;
  std::string name() const override;
  PolicyStats stats() const override;

  bool is_committed() const override { return inner_->is_committed(); }
  const Eigen::VectorXd& commit_action() const override;

  const EtcPolicy& inner() const { return *inner_; }
  std::size_t inner_observations() const { return inner_observations_; }

 private:
  std::unique_ptr<EtcPolicy> inner_;
  VectorXd c_;
  std::size_t horizon_;
  std::size_t t_ = 0;
  std::size_t inner_observations_ = 0;
  bool awaiting_reward_ = false;
  bool feeding_inner_ = false;  // current round is the c + x̃ half of a pair
  std::optional<double> pending_;
  VectorXd action_;
  mutable std::optional<VectorXd> committed_x_;
};

// E2TC(α) for an arbitrary ellipsoid: inner E2TC on the centered set with
// σ√2 and horizon ⌊T/2⌋, wrapped in ReducedPolicy.
std::unique_ptr<ReducedPolicy> make_reduced_e2tc(const std::shared_ptr<const EllipsoidSet>& set, double alpha,
                                                 double sigma, std::size_t horizon);

}  // namespace ellbandit
