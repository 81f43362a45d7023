#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include <Eigen/Dense>

namespace ellbandit {

// Warm-up/exploration diagnostics exposed by explore-then-commit policies.
struct PolicyStats {
  std::optional<double> b_hat;               // norm estimate at warm-up exit
  std::optional<std::size_t> warmup_length;  // rounds spent in warm-up
  std::optional<std::size_t> exit_index;     // 1-based subphase that passed the norm test
  std::optional<std::size_t> explore_budget; // N_e
  std::optional<std::size_t> commit_step;    // first committed round, 0-based
};

// Step/observe protocol: next_action() is called once per round, followed by
// exactly one observe() with the realized reward.
class Policy {
 public:
  virtual ~Policy() = default;

  virtual const Eigen::VectorXd& next_action() = 0;
  virtual void observe(double reward) = 0;
  virtual std::string name() const = 0;
  virtual PolicyStats stats() const { return {}; }
};

// A policy with a stopping time after which it repeats one action forever.
class EtcPolicy : public Policy {
 public:
  virtual bool is_committed() const = 0;
  // Only valid once is_committed() is true.
  virtual const Eigen::VectorXd& commit_action() const = 0;
};

}  // namespace ellbandit
