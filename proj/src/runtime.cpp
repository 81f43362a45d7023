#include "ellbandit/runtime.hpp"

#include <chrono>

#include "ellbandit/e2tc.hpp"
#include "ellbandit/errors.hpp"

namespace ellbandit {

namespace {

using Clock = std::chrono::steady_clock;

const char* phase_name(E2tcPhase p) {
  switch (p) {
    case E2tcPhase::Warmup: return "warmup";
    case E2tcPhase::Explore: return "explore";
    case E2tcPhase::Commit: return "commit";
  }
  return "unknown";
}

// Forwards to an E2TC policy and timestamps its phase transitions.
class PhaseClock final : public Policy {
 public:
  explicit PhaseClock(E2tcPolicy& inner) : inner_(inner), phase_(inner.phase()), start_(Clock::now()) {}

  const Eigen::VectorXd& next_action() override { return inner_.next_action(); }
  void observe(double reward) override {
    inner_.observe(reward);
    ++steps_;
    if (inner_.phase() != phase_) close_phase();
  }
  std::string name() const override { return inner_.name(); }
  PolicyStats stats() const override { return inner_.stats(); }

  std::vector<PhaseTiming> finish() {
    close_phase();
    return std::move(timings_);
  }

 private:
  void close_phase() {
    const auto now = Clock::now();
    timings_.push_back({phase_name(phase_), steps_, std::chrono::duration<double>(now - start_).count()});
    phase_ = inner_.phase();
    start_ = now;
    steps_ = 0;
  }

  E2tcPolicy& inner_;
  E2tcPhase phase_;
  Clock::time_point start_;
  std::size_t steps_ = 0;
  std::vector<PhaseTiming> timings_;
};

}  // namespace

RuntimeReport runtime_probe(const PolicySpec& spec, std::size_t d, std::size_t horizon, double norm,
                            std::uint64_t seed) {
  require(d >= 1 && horizon >= 1 && norm > 0.0, "runtime_probe: need d >= 1, T >= 1, norm > 0");
  auto set = std::make_shared<const EllipsoidSet>(EllipsoidSet::ball(static_cast<Eigen::Index>(d)));
  Rng theta_rng(derive_seed(seed, d, 4));
  VectorXd theta = standard_normal_vector(set->dim(), theta_rng);
  theta *= norm / theta.norm();
  const Scenario scenario{"probe", set, {theta, NoiseModel{NoiseKind::Gaussian, 1.0}}};

  RuntimeReport report;
  report.d = d;
  report.horizon = horizon;
  auto policy = make_policy(spec, scenario, horizon, derive_seed(seed, 0, 1));
  report.policy = policy->name();
  Rng rng(seed);

  const auto begin = Clock::now();
  if (auto* e2tc = dynamic_cast<E2tcPolicy*>(policy.get())) {
    PhaseClock clock(*e2tc);
    const RegretTrace trace =
        run_episode(clock, scenario.instance, *set, horizon, rng, TraceDetail::Checkpoints);
    report.phases = clock.finish();
    report.total_regret = trace.total_regret;
  } else {
    const RegretTrace trace =
        run_episode(*policy, scenario.instance, *set, horizon, rng, TraceDetail::Checkpoints);
    report.total_regret = trace.total_regret;
  }
  report.seconds = std::chrono::duration<double>(Clock::now() - begin).count();
  report.ns_per_step = report.seconds * 1e9 / static_cast<double>(horizon);
  if (report.phases.empty()) report.phases.push_back({"all", horizon, report.seconds});
  return report;
}

}  // namespace ellbandit
