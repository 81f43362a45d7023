#include "ellbandit/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>

#include "ellbandit/bounds.hpp"
#include "ellbandit/errors.hpp"
#include "ellbandit/lowerbound.hpp"

namespace ellbandit {

using nlohmann::json;

namespace {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

VectorXd to_vector(const json& j, const char* what) {
  if (!j.is_array() || j.empty()) throw ConfigError(std::string(what) + " must be a non-empty array");
  VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw ConfigError(std::string(what) + " must contain numbers");
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return v;
}

MatrixXd to_matrix(const json& j) {
  if (!j.is_array() || j.empty()) throw ConfigError("action_set.A must be a non-empty array of rows");
  const auto n = static_cast<Eigen::Index>(j.size());
  MatrixXd m(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const VectorXd row = to_vector(j[static_cast<std::size_t>(r)], "action_set.A row");
    if (row.size() != n) throw ConfigError("action_set.A must be square");
    m.row(r) = row.transpose();
  }
  return m;
}

// Builds action sets of a requested dimension from the "action_set" block.
class ActionSetFactory {
 public:
  explicit ActionSetFactory(const json& spec) {
    if (spec.contains("A")) {
      a_ = to_matrix(spec.at("A"));
    } else if (spec.contains("diag")) {
      a_ = MatrixXd(to_vector(spec.at("diag"), "action_set.diag").asDiagonal());
    } else {
      const std::string shape = spec.value("shape", "ball");
      if (shape != "ball") throw ConfigError("unknown action_set shape '" + shape + "'");
    }
    if (spec.contains("c")) c_ = to_vector(spec.at("c"), "action_set.c");
    if (a_ && c_ && c_->size() != a_->rows()) throw ConfigError("action_set.c does not match A");
  }

  std::optional<Eigen::Index> fixed_dim() const {
    if (a_) return a_->rows();
    if (c_) return c_->size();
    return std::nullopt;
  }

  std::shared_ptr<const EllipsoidSet> make(Eigen::Index d) const {
    if (auto fixed = fixed_dim(); fixed && *fixed != d) {
      throw ConfigError("instance dimension " + std::to_string(d) + " does not match action set dimension " +
                        std::to_string(*fixed));
    }
    try {
      PdMatrix a = a_ ? PdMatrix(*a_) : PdMatrix::identity(d);
      VectorXd c = c_ ? *c_ : VectorXd::Zero(d);
      return std::make_shared<const EllipsoidSet>(std::move(a), std::move(c));
    } catch (const NotPositiveDefinite& e) {
      throw ConfigError(std::string("action_set.A: ") + e.what());
    }
  }

 private:
  std::optional<MatrixXd> a_;
  std::optional<VectorXd> c_;
};

VectorXd direction_with_anorm(const EllipsoidSet& set, double norm, const json& inst, std::uint64_t seed) {
  VectorXd v;
  if (inst.contains("direction")) {
    v = to_vector(inst.at("direction"), "instances.direction");
    if (v.size() != set.dim()) throw ConfigError("instances.direction has the wrong dimension");
  } else {
    Rng rng(derive_seed(inst.value("direction_seed", seed), static_cast<std::uint64_t>(set.dim()), 2));
    v = standard_normal_vector(set.dim(), rng);
  }
  const double n = set.anorm(v);
  if (!(n > 0.0)) throw ConfigError("instances.direction must be nonzero");
  return v * (norm / n);
}

std::vector<Scenario> build_scenarios(const json& doc, const NoiseModel& noise, std::size_t horizon,
                                      std::uint64_t base_seed) {
  const ActionSetFactory factory(doc.value("action_set", json::object()));
  if (!doc.contains("instances")) throw ConfigError("config needs an 'instances' block");
  const json& inst = doc.at("instances");
  const std::string kind = inst.value("kind", "explicit");
  std::vector<Scenario> out;

  if (kind == "explicit") {
    const json& thetas = inst.at("thetas");
    if (!thetas.is_array() || thetas.empty()) throw ConfigError("instances.thetas must be a non-empty array");
    for (std::size_t k = 0; k < thetas.size(); ++k) {
      VectorXd theta = to_vector(thetas[k], "instances.thetas entry");
      auto set = factory.make(theta.size());
      out.push_back({"theta" + std::to_string(k), set, {std::move(theta), noise}});
    }
  } else if (kind == "norm_sweep") {
    const auto d = static_cast<Eigen::Index>(inst.value("d", factory.fixed_dim().value_or(3)));
    auto set = factory.make(d);
    for (const json& nj : inst.at("norms")) {
      const double norm = nj.get<double>();
      if (!(norm > 0.0)) throw ConfigError("instances.norms must be positive");
      out.push_back({"norm=" + format_double(norm), set, {direction_with_anorm(*set, norm, inst, base_seed), noise}});
    }
  } else if (kind == "dim_sweep") {
    if (factory.fixed_dim()) throw ConfigError("dim_sweep needs a dimension-free action set (shape ball)");
    const double norm = inst.value("norm", 10.0);
    for (const json& dj : inst.at("dims")) {
      const auto d = dj.get<Eigen::Index>();
      if (d < 1) throw ConfigError("instances.dims must be >= 1");
      auto set = factory.make(d);
      out.push_back({"d=" + std::to_string(d), set, {direction_with_anorm(*set, norm, inst, base_seed), noise}});
    }
  } else if (kind == "assouad") {
    const auto dim = static_cast<Eigen::Index>(inst.value("D", factory.fixed_dim().value_or(4)));
    const double b = inst.value("B", 1.0);
    auto set = factory.make(dim);
    const std::uint64_t seed = inst.value("seed", base_seed);
    VectorXd base = inst.contains("theta_base") ? to_vector(inst.at("theta_base"), "instances.theta_base")
                                                : direction_with_anorm(*set, b, inst, seed);
    if (base.size() != dim) throw ConfigError("instances.theta_base has the wrong dimension");
    base *= b / set->anorm(base);
    const AssouadFamily fam = build_assouad(base, b, horizon, noise.scale, set, seed);
    for (const SignVector& xi : fam.sign_patterns()) {
      std::string id = "xi=";
      for (int s : xi) id += s > 0 ? '+' : '-';
      out.push_back({id, set, {fam.theta(xi), noise}});
    }
  } else if (kind == "prior") {
    const auto d = static_cast<Eigen::Index>(inst.value("d", factory.fixed_dim().value_or(3)));
    const double b = inst.value("B", 1.0);
    const std::size_t count = inst.value("count", std::size_t{10});
    auto set = factory.make(d);
    const GaussianPrior prior(b, set);
    Rng rng(derive_seed(inst.value("seed", base_seed), 0, 3));
    for (std::size_t k = 0; k < count; ++k) out.push_back({"prior" + std::to_string(k), set, {prior.sample(rng), noise}});
  } else {
    throw ConfigError("unknown instances.kind '" + kind + "'");
  }
  return out;
}

PolicySpec parse_policy(const json& j) {
  if (j.is_string()) return parse_policy_spec(j.get<std::string>());
  if (!j.is_object() || !j.contains("name")) throw ConfigError("policy entries must be strings or objects with 'name'");
  PolicySpec spec = parse_policy_spec(j.at("name").get<std::string>());
  spec.alpha = j.value("alpha", spec.alpha);
  spec.lambda = j.value("lambda", spec.lambda);
  spec.s_bound = j.value("S", spec.s_bound);
  spec.delta = j.value("delta", spec.delta);
  return spec;
}

}  // namespace

RegretSummary summarize(const std::vector<double>& values) {
  RegretSummary s;
  s.runs = values.size();
  if (values.empty()) return s;
  // Sorting first makes the floating-point sums independent of run order.
  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  double sum = 0.0;
  for (double v : sorted) sum += v;
  s.mean = sum / static_cast<double>(sorted.size());
  if (sorted.size() > 1) {
    double ss = 0.0;
    for (double v : sorted) ss += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(ss / static_cast<double>(sorted.size() - 1));
  }
  const double half = 1.96 * s.stddev / std::sqrt(static_cast<double>(sorted.size()));
  s.ci_low = s.mean - half;
  s.ci_high = s.mean + half;
  return s;
}

BoundReport make_bound_report(const Scenario& scenario, const PolicySpec& policy, std::size_t horizon,
                              const std::vector<const EpisodeResult*>& runs, const RegretSummary& regret) {
  BoundReport r;
  const std::size_t d = scenario.dim();
  const double sigma = scenario.instance.noise.scale;
  const double norm = scenario.norm();
  const auto t = static_cast<double>(horizon);
  r.checked = policy.kind == "e2tc" && policy.alpha == 3.0 && norm > 0.0;
  r.reduced = !scenario.set->is_centered();
  if (!(norm > 0.0)) return r;

  r.regret_rhs = r.reduced ? translated_regret_rhs(d, sigma, t, norm) : centered_regret_rhs(d, sigma, t, norm);
  r.regret_pass = regret.ci_high <= r.regret_rhs;

  // Warm-up guarantees concern the (inner) E2TC run; under the reduction it
  // sees variance proxy 2σ² and horizon ⌊T/2⌋.
  const double inner_sigma = r.reduced ? sigma * std::sqrt(2.0) : sigma;
  const double inner_t = r.reduced ? std::floor(t / 2.0) : t;
  std::size_t failures = 0;
  double length_sum = 0.0;
  for (const EpisodeResult* run : runs) {
    const auto& b_hat = run->stats.b_hat;
    if (!b_hat || *b_hat < 0.5 * norm || *b_hat > 1.5 * norm) ++failures;
    const double len = static_cast<double>(run->stats.warmup_length.value_or(0));
    length_sum += r.reduced ? len / 2.0 : len;
  }
  const auto n = static_cast<double>(std::max<std::size_t>(runs.size(), 1));
  r.warmup_failure_rate = static_cast<double>(failures) / n;
  r.warmup_failure_rhs = warmup_failure_rhs(d, inner_sigma, inner_t, norm);
  const double p = std::min(r.warmup_failure_rhs, 1.0);
  r.warmup_failure_tolerance = 3.0 * std::sqrt(p * (1.0 - p) / n);
  r.warmup_failure_pass = r.warmup_failure_rate <= r.warmup_failure_rhs + r.warmup_failure_tolerance;
  r.mean_warmup_length = length_sum / n;
  r.warmup_length_rhs = warmup_length_rhs(d, inner_sigma, inner_t, norm);
  r.warmup_length_pass = r.mean_warmup_length <= r.warmup_length_rhs;
  return r;
}

ExperimentConfig parse_experiment_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  ExperimentConfig cfg;
  try {
    cfg.experiment_id = doc.value("experiment_id", cfg.experiment_id);
    const auto horizon = doc.value("T", 10000.0);
    if (!(horizon >= 1.0) || horizon != std::floor(horizon)) throw ConfigError("T must be a positive integer");
    cfg.plan.horizon = static_cast<std::size_t>(horizon);
    const auto runs = doc.value("runs", 20LL);
    if (runs < 1) throw ConfigError("runs must be >= 1");
    cfg.plan.runs = static_cast<std::size_t>(runs);
    cfg.plan.base_seed = doc.value("base_seed", std::uint64_t{0});
    const double sigma = doc.value("sigma", 1.0);
    if (!(sigma >= 0.0)) throw ConfigError("sigma must be >= 0");
    const NoiseModel noise{parse_noise_kind(doc.value("noise", std::string("gaussian"))), sigma};

    cfg.plan.scenarios = build_scenarios(doc, noise, cfg.plan.horizon, cfg.plan.base_seed);

    const json policies = doc.value("policies", json::array({"e2tc:3"}));
    if (!policies.is_array() || policies.empty()) throw ConfigError("policies must be a non-empty array");
    for (const json& p : policies) cfg.plan.policies.push_back(parse_policy(p));

    cfg.check_bounds = doc.value("check_bounds", false);
    cfg.parallel = doc.value("parallel", true);
    if (doc.contains("out")) cfg.out = doc.at("out").get<std::string>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  return cfg;
}

bool ExperimentResult::all_checks_pass() const {
  if (!checks_requested) return true;
  return std::all_of(rows.begin(), rows.end(),
                     [](const ResultRow& r) { return !r.bounds || !r.bounds->checked || r.bounds->pass(); });
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  const MonteCarloPlan& plan = config.plan;
  if (plan.scenarios.empty() || plan.policies.empty()) throw ConfigError("nothing to run");
  for (const Scenario& sc : plan.scenarios) {
    for (const PolicySpec& p : plan.policies) validate_policy(p, sc, plan.horizon);
  }

  ExperimentResult result;
  result.experiment_id = config.experiment_id;
  result.horizon = plan.horizon;
  result.checks_requested = config.check_bounds;
  result.episodes = config.parallel ? run_tasks_parallel(plan) : run_tasks_serial(plan);

  std::size_t idx = 0;
  for (std::size_t s = 0; s < plan.scenarios.size(); ++s) {
    for (std::size_t p = 0; p < plan.policies.size(); ++p) {
      std::vector<const EpisodeResult*> runs;
      std::vector<double> totals;
      for (std::size_t r = 0; r < plan.runs; ++r, ++idx) {
        runs.push_back(&result.episodes[idx]);
        totals.push_back(result.episodes[idx].total_regret);
      }
      const Scenario& sc = plan.scenarios[s];
      ResultRow row;
      row.scenario = s;
      row.policy = p;
      row.scenario_id = sc.id;
      row.policy_label = plan.policies[p].label();
      row.d = sc.dim();
      row.norm = sc.norm();
      row.regret = summarize(totals);
      if (plan.policies[p].kind == "e2tc") {
        row.bounds = make_bound_report(sc, plan.policies[p], plan.horizon, runs, row.regret);
      }
      result.rows.push_back(std::move(row));
    }
  }
  return result;
}

void write_traces_csv(const ExperimentResult& result, const MonteCarloPlan& plan, std::ostream& out) {
  out << kTraceCsvHeader << '\n';
  for (const EpisodeResult& ep : result.episodes) {
    const Scenario& sc = plan.scenarios.at(ep.scenario);
    const std::string prefix = result.experiment_id + "," + plan.policies.at(ep.policy).label() + "," +
                               std::to_string(sc.dim()) + "," + std::to_string(result.horizon) + "," +
                               format_double(sc.norm()) + "," + std::to_string(ep.seed) + ",";
    for (const Checkpoint& c : ep.checkpoints) {
      out << prefix << c.step << ',' << format_double(c.cum_regret) << '\n';
    }
  }
}

json summary_json(const ExperimentResult& result) {
  json rows = json::array();
  for (const ResultRow& r : result.rows) {
    json row = {{"scenario", r.scenario_id},
                {"policy", r.policy_label},
                {"d", r.d},
                {"T", result.horizon},
                {"norm", r.norm},
                {"runs", r.regret.runs},
                {"mean", r.regret.mean},
                {"std", r.regret.stddev},
                {"ci95", {r.regret.ci_low, r.regret.ci_high}}};
    if (r.bounds) {
      const BoundReport& b = *r.bounds;
      row["bound_report"] = {{"checked", b.checked},
                             {"bound", b.reduced ? "translated" : "centered"},
                             {"regret_rhs", b.regret_rhs},
                             {"regret_pass", b.regret_pass},
                             {"warmup_failure_rate", b.warmup_failure_rate},
                             {"warmup_failure_rhs", b.warmup_failure_rhs},
                             {"warmup_failure_tolerance", b.warmup_failure_tolerance},
                             {"warmup_failure_pass", b.warmup_failure_pass},
                             {"mean_warmup_length", b.mean_warmup_length},
                             {"warmup_length_rhs", b.warmup_length_rhs},
                             {"warmup_length_pass", b.warmup_length_pass},
                             {"pass", b.pass()}};
    }
    rows.push_back(std::move(row));
  }
  return {{"experiment_id", result.experiment_id},
          {"T", result.horizon},
          {"checks_requested", result.checks_requested},
          {"all_checks_pass", result.all_checks_pass()},
          {"rows", std::move(rows)}};
}

void write_outputs(const ExperimentResult& result, const MonteCarloPlan& plan, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream csv(dir / "traces.csv", std::ios::binary);
    if (!csv) throw Error("cannot write " + (dir / "traces.csv").string());
    write_traces_csv(result, plan, csv);
  }
  std::ofstream js(dir / "summary.json", std::ios::binary);
  if (!js) throw Error("cannot write " + (dir / "summary.json").string());
  js << summary_json(result).dump(2) << '\n';
}

}  // namespace ellbandit
