#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "ellbandit/montecarlo.hpp"

namespace ellbandit {

struct RegretSummary {
  std::size_t runs = 0;
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation (0 for a single run)
  double ci_low = 0.0;  // mean ∓ 1.96·std/√runs
  double ci_high = 0.0;
};

RegretSummary summarize(const std::vector<double>& values);

// Closed-form guarantees next to the measured regret of one E2TC row.
// `checked` is true when the guarantees apply as stated (α = 3); only
// checked rows decide the overall verdict.
struct BoundReport {
  bool checked = false;
  bool reduced = false;      // translated set: reduced-policy bound instead of the centred one
  double regret_rhs = 0.0;
  bool regret_pass = false;  // ci_high ≤ regret_rhs
  double warmup_failure_rate = 0.0;
  double warmup_failure_rhs = 0.0;
  double warmup_failure_tolerance = 0.0;  // 3 binomial standard deviations at the bound
  bool warmup_failure_pass = false;
  double mean_warmup_length = 0.0;
  double warmup_length_rhs = 0.0;
  bool warmup_length_pass = false;

  bool pass() const { return regret_pass && warmup_failure_pass && warmup_length_pass; }
};

struct ResultRow {
  std::size_t scenario = 0;
  std::size_t policy = 0;
  std::string scenario_id;
  std::string policy_label;
  std::size_t d = 0;
  double norm = 0.0;
  RegretSummary regret;
  std::optional<BoundReport> bounds;
};

// Pure function of the per-run results of one E2TC row.
BoundReport make_bound_report(const Scenario& scenario, const PolicySpec& policy, std::size_t horizon,
                              const std::vector<const EpisodeResult*>& runs, const RegretSummary& regret);

struct ExperimentConfig {
  std::string experiment_id = "experiment";
  MonteCarloPlan plan;
  bool check_bounds = false;
  bool parallel = true;
  std::filesystem::path out;  // empty: no files written
};

// Parses the JSON document. The action set is given by "action_set" (shape
// "ball", or "A"/"diag" with optional "c"); instances by "instances" with
// kind explicit | norm_sweep | dim_sweep | assouad | prior.
ExperimentConfig parse_experiment_config(const nlohmann::json& doc);

struct ExperimentResult {
  std::string experiment_id;
  std::size_t horizon = 0;
  std::vector<EpisodeResult> episodes;
  std::vector<ResultRow> rows;
  bool checks_requested = false;

  bool all_checks_pass() const;
};

// Validates every (scenario, policy) pair before running anything.
ExperimentResult run_experiment(const ExperimentConfig& config);

// Header plus one row per checkpoint of every episode, in (scenario, policy,
// seed) order:
// experiment_id,policy,d,T,norm,seed,step,cum_regret
void write_traces_csv(const ExperimentResult& result, const MonteCarloPlan& plan, std::ostream& out);
nlohmann::json summary_json(const ExperimentResult& result);
// Writes traces.csv and summary.json into `dir`.
void write_outputs(const ExperimentResult& result, const MonteCarloPlan& plan, const std::filesystem::path& dir);

inline constexpr const char* kTraceCsvHeader = "experiment_id,policy,d,T,norm,seed,step,cum_regret";

}  // namespace ellbandit
