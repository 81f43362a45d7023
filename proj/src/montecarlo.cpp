#include "ellbandit/montecarlo.hpp"

#include <exception>
#include <sstream>

#include "ellbandit/baselines.hpp"
#include "ellbandit/e2tc.hpp"
#include "ellbandit/errors.hpp"
#include "ellbandit/reduction.hpp"

namespace ellbandit {

std::string PolicySpec::label() const {
  if (kind == "e2tc") {
    std::ostringstream os;
    os << "e2tc(" << alpha << ")";
    return os.str();
  }
  return kind;
}

PolicySpec parse_policy_spec(const std::string& text) {
  PolicySpec spec;
  const auto colon = text.find(':');
  spec.kind = text.substr(0, colon);
  if (spec.kind != "e2tc" && spec.kind != "oracle_etc" && spec.kind != "oful_ball" && spec.kind != "uniform" &&
      spec.kind != "oracle") {
    throw ConfigError("unknown policy '" + spec.kind + "'");
  }
  if (colon != std::string::npos) {
    if (spec.kind != "e2tc") throw ConfigError("only e2tc takes a parameter (e2tc:<alpha>)");
    try {
      spec.alpha = std::stod(text.substr(colon + 1));
    } catch (const std::exception&) {
      throw ConfigError("invalid alpha in policy '" + text + "'");
    }
    if (!(spec.alpha > 0.0)) throw ConfigError("alpha must be positive in '" + text + "'");
  }
  return spec;
}

void validate_policy(const PolicySpec& spec, const Scenario& scenario, std::size_t horizon) {
  if (spec.kind == "e2tc") {
    if (!(spec.alpha > 0.0)) throw ConfigError("e2tc: alpha must be positive");
    if (!scenario.set->is_centered() && horizon < 2) throw ConfigError("e2tc on a translated set needs T >= 2");
  } else if (spec.kind == "oracle_etc") {
    if (!scenario.set->is_centered()) throw ConfigError("oracle_etc requires a centered action set");
    if (!(scenario.norm() > 0.0)) throw ConfigError("oracle_etc requires theta != 0");
  } else if (spec.kind == "oful_ball") {
    if (!scenario.set->is_unit_ball()) throw UnsupportedActionSet("oful_ball requires the centered unit ball");
    if (!(spec.lambda > 0.0)) throw ConfigError("oful_ball: lambda must be positive");
  } else if (spec.kind == "oracle") {
    if (!(scenario.norm() > 0.0)) throw ConfigError("oracle requires theta != 0");
  } else if (spec.kind != "uniform") {
    throw ConfigError("unknown policy '" + spec.kind + "'");
  }
}

std::unique_ptr<Policy> make_policy(const PolicySpec& spec, const Scenario& scenario, std::size_t horizon,
                                    std::uint64_t seed) {
  validate_policy(spec, scenario, horizon);
  const double sigma = scenario.instance.noise.scale;
  if (spec.kind == "e2tc") {
    if (!scenario.set->is_centered()) return make_reduced_e2tc(scenario.set, spec.alpha, sigma, horizon);
    return std::make_unique<E2tcPolicy>(E2tcConfig{scenario.set, spec.alpha, sigma, horizon});
  }
  if (spec.kind == "oracle_etc") {
    return std::make_unique<E2tcPolicy>(oracle_etc_policy(scenario.norm(), sigma, horizon, scenario.set));
  }
  if (spec.kind == "oful_ball") {
    return std::make_unique<OfulBallPolicy>(*scenario.set,
                                            OfulBallConfig{sigma, horizon, spec.s_bound, spec.lambda, spec.delta});
  }
  if (spec.kind == "uniform") return std::make_unique<UniformPolicy>(scenario.set, seed);
  return std::make_unique<OraclePolicy>(*scenario.set, scenario.instance.theta);
}

std::uint64_t run_seed(std::uint64_t base_seed, std::size_t run) { return derive_seed(base_seed, run); }

EpisodeResult run_task(const MonteCarloPlan& plan, std::size_t scenario, std::size_t policy, std::size_t run) {
  const Scenario& sc = plan.scenarios.at(scenario);
  const std::uint64_t seed = run_seed(plan.base_seed, run);
  auto pol = make_policy(plan.policies.at(policy), sc, plan.horizon, derive_seed(seed, 0, 1));
  Rng noise_rng(seed);
  RegretTrace trace = run_episode(*pol, sc.instance, *sc.set, plan.horizon, noise_rng, TraceDetail::Checkpoints);
  return EpisodeResult{scenario, policy, run, seed, trace.total_regret, std::move(trace.checkpoints), trace.stats};
}

namespace {

std::size_t task_count(const MonteCarloPlan& plan) {
  return plan.scenarios.size() * plan.policies.size() * plan.runs;
}

void decode(const MonteCarloPlan& plan, std::size_t index, std::size_t& s, std::size_t& p, std::size_t& r) {
  r = index % plan.runs;
  p = (index / plan.runs) % plan.policies.size();
  s = index / (plan.runs * plan.policies.size());
}

}  // namespace

std::vector<EpisodeResult> run_tasks_serial(const MonteCarloPlan& plan) {
  const std::size_t n = task_count(plan);
  std::vector<EpisodeResult> results(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t s, p, r;
    decode(plan, i, s, p, r);
    results[i] = run_task(plan, s, p, r);
  }
  return results;
}

std::vector<EpisodeResult> run_tasks_parallel(const MonteCarloPlan& plan) {
  const std::size_t n = task_count(plan);
  std::vector<EpisodeResult> results(n);
  std::vector<std::exception_ptr> errors(n);
  const long long count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic, 1)
  for (long long i = 0; i < count; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    try {
      std::size_t s, p, r;
      decode(plan, idx, s, p, r);
      results[idx] = run_task(plan, s, p, r);
    } catch (...) {
      errors[idx] = std::current_exception();
    }
  }
  // Report the failure of the lowest task index so the error is schedule-independent.
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

}  // namespace ellbandit
