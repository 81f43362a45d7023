#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "ellbandit/environment.hpp"
#include "ellbandit/policy.hpp"

namespace ellbandit {

struct PolicySpec {
  std::string kind = "e2tc";  // e2tc | oracle_etc | oful_ball | uniform | oracle
  double alpha = 3.0;
  double lambda = 1.0;
  double s_bound = 25.0;
  double delta = 0.0;  // OFUL confidence; 0 selects 1/T

  std::string label() const;
};

// Parses "name" or "name:alpha" (e.g. "e2tc:1").
PolicySpec parse_policy_spec(const std::string& text);

// One (action set, hidden parameter) pair of an experiment.
struct Scenario {
  std::string id;
  std::shared_ptr<const EllipsoidSet> set;
  BanditInstance instance;

  std::size_t dim() const { return static_cast<std::size_t>(set->dim()); }
  double norm() const { return set->anorm(instance.theta); }
};

// Builds a fresh policy for one episode. E2TC on a non-centered set is
// wrapped in the pairing reduction; OFUL-ball rejects anything but the unit
// ball. `seed` feeds policies with internal randomness.
std::unique_ptr<Policy> make_policy(const PolicySpec& spec, const Scenario& scenario, std::size_t horizon,
                                    std::uint64_t seed);

// Throws ConfigError/UnsupportedActionSet if `spec` cannot run on `scenario`.
void validate_policy(const PolicySpec& spec, const Scenario& scenario, std::size_t horizon);

struct EpisodeResult {
  std::size_t scenario = 0;
  std::size_t policy = 0;
  std::size_t run = 0;
  std::uint64_t seed = 0;
  double total_regret = 0.0;
  std::vector<Checkpoint> checkpoints;
  PolicyStats stats;
};

struct MonteCarloPlan {
  std::vector<Scenario> scenarios;
  std::vector<PolicySpec> policies;
  std::size_t horizon = 1;
  std::size_t runs = 1;
  std::uint64_t base_seed = 0;
};

// Seed of run k; identical across scenarios and policies so comparisons are paired.
std::uint64_t run_seed(std::uint64_t base_seed, std::size_t run);

// Runs one (scenario, policy, run) episode.
EpisodeResult run_task(const MonteCarloPlan& plan, std::size_t scenario, std::size_t policy, std::size_t run);

// Every (scenario, policy, run) triple, ordered by that key. The serial
// version is the reference; the OpenMP version must produce identical output.
std::vector<EpisodeResult> run_tasks_serial(const MonteCarloPlan& plan);
std::vector<EpisodeResult> run_tasks_parallel(const MonteCarloPlan& plan);

}  // namespace ellbandit
