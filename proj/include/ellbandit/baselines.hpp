#pragma once

#include <cstddef>
#include <memory>

#include <Eigen/Dense>

#include "ellbandit/e2tc.hpp"
#include "ellbandit/ellipsoid.hpp"
#include "ellbandit/policy.hpp"
#include "ellbandit/random.hpp"

namespace ellbandit {

// E2TC with the warm-up replaced by the true ‖θ‖_A.
E2tcPolicy oracle_etc_policy(double norm_a_theta, double sigma, std::size_t horizon,
                             std::shared_ptr<const EllipsoidSet> set);

// Always plays x*(θ); zero pseudo-regret reference.
class OraclePolicy final : public Policy {
 public:
  OraclePolicy(const EllipsoidSet& set, const VectorXd& theta);

  const Eigen::VectorXd& next_action() override { return x_; }
  void observe(double) override {}
  std::string name() const override { return "oracle"; }

 private:
  VectorXd x_;
};

// c + S·u/‖u‖ with u standard Gaussian: a random boundary point each round.
class UniformPolicy final : public Policy {
 public:
  UniformPolicy(std::shared_ptr<const EllipsoidSet> set, std::uint64_t seed);

  const Eigen::VectorXd& next_action() override;
  void observe(double) override {}
  std::string name() const override { return "uniform"; }

 private:
  std::shared_ptr<const EllipsoidSet> set_;
  Rng rng_;
  VectorXd x_;
};

struct ConfidenceMax {
  VectorXd theta;  // maximizer
  double value = 0.0;  // ‖theta‖₂
};

// max ‖θ‖₂ subject to ‖θ − θ̂‖_V ≤ β, solved exactly: in the eigenbasis of V
// the maximizer is θ̂ + u with (λV − I)u = θ̂, λ > 1/v_min fixed by the
// boundary condition uᵀVu = β² (a monotone secular equation, solved by
// bisection). When θ̂ has no component on the softest eigenspace and the
// remaining components do not reach the boundary, the slack goes along that
// eigenspace instead.
ConfidenceMax max_norm_over_confidence(const VectorXd& theta_hat, const PdMatrix& v, double beta);

struct OfulBallConfig {
  double sigma = 1.0;
  std::size_t horizon = 1;
  double s_bound = 25.0;
  double lambda = 1.0;
  double delta = 0.0;  // 0 selects 1/T
};

// Optimistic policy on the unit ball: plays θ*_t/‖θ*_t‖ where θ*_t maximizes
// ‖θ‖₂ over the ridge confidence ellipsoid with radius
// β_t = σ·sqrt(d·log((1 + t/λ)/δ)) + √λ·S.
class OfulBallPolicy final : public Policy {
 public:
  OfulBallPolicy(const EllipsoidSet& set, OfulBallConfig config);

  const Eigen::VectorXd& next_action() override;
  void observe(double reward) override;
  std::string name() const override { return "oful_ball"; }

  double radius() const;
  const MatrixXd& gram() const { return v_; }
  VectorXd ridge_estimate() const;

 private:
  OfulBallConfig config_;
  Eigen::Index d_;
  MatrixXd v_;
  VectorXd b_;
  std::size_t t_ = 0;
  VectorXd x_;
};

}  // namespace ellbandit
