// Command-line front end: experiment runner, the two standard sweeps, bound
// evaluation and runtime probes.
//
//   ellbandit run config.json [--T N] [--runs N] [--seed S] [--out DIR] [--policy LIST]
//   ellbandit sweep-norm [--d 3] [--T 10000] [--runs 20] ...
//   ellbandit sweep-dim  [--norm 10] [--dims 2,10,...,90] ...
//   ellbandit bounds --d 2 --sigma 1 --T 10000 --norm 1
//   ellbandit bench [--policy e2tc] [--d 100] [--T 100000]
//
// Exit status is 0 unless bound checks were requested and one failed (1), or
// the input was invalid (2).

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "ellbandit/bounds.hpp"
#include "ellbandit/errors.hpp"
#include "ellbandit/experiment.hpp"
#include "ellbandit/runtime.hpp"

using nlohmann::json;
using namespace ellbandit;

namespace {

struct Overrides {
  std::optional<std::size_t> horizon;
  std::optional<std::size_t> runs;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::string> policy;
  std::optional<double> sigma;
  bool check = false;
  bool serial = false;
};

void add_overrides(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--T", o.horizon, "Horizon");
  cmd->add_option("--runs", o.runs, "Seeded runs per (instance, policy)");
  cmd->add_option("--seed", o.seed, "Base seed");
  cmd->add_option("--out", o.out, "Output directory for traces.csv and summary.json");
  cmd->add_option("--policy", o.policy, "Comma-separated policies, e.g. e2tc:1,e2tc:3,oful_ball");
  cmd->add_option("--sigma", o.sigma, "Noise level");
  cmd->add_flag("--check", o.check, "Evaluate the regret/warm-up guarantees and set the exit status");
  cmd->add_flag("--serial", o.serial, "Run episodes on one thread (reference path)");
}

json apply_overrides(json doc, const Overrides& o) {
  if (o.horizon) doc["T"] = *o.horizon;
  if (o.runs) doc["runs"] = *o.runs;
  if (o.seed) doc["base_seed"] = *o.seed;
  if (o.out) doc["out"] = *o.out;
  if (o.sigma) doc["sigma"] = *o.sigma;
  if (o.check) doc["check_bounds"] = true;
  if (o.serial) doc["parallel"] = false;
  if (o.policy) {
    json list = json::array();
    std::stringstream ss(*o.policy);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (!item.empty()) list.push_back(item);
    }
    doc["policies"] = list;
  }
  return doc;
}

void print_table(const ExperimentResult& result) {
  std::cout << "scenario,policy,d,norm,runs,mean,std,ci_low,ci_high,bound_rhs,bound_pass\n";
  for (const ResultRow& r : result.rows) {
    std::cout << r.scenario_id << ',' << r.policy_label << ',' << r.d << ',' << r.norm << ',' << r.regret.runs << ','
              << r.regret.mean << ',' << r.regret.stddev << ',' << r.regret.ci_low << ',' << r.regret.ci_high << ',';
    if (r.bounds) {
      std::cout << r.bounds->regret_rhs << ',' << (r.bounds->checked ? (r.bounds->pass() ? "pass" : "FAIL") : "n/a");
    } else {
      std::cout << ",";
    }
    std::cout << '\n';
  }
}

int execute(const json& doc) {
  const ExperimentConfig cfg = parse_experiment_config(doc);
  const ExperimentResult result = run_experiment(cfg);
  if (!cfg.out.empty()) write_outputs(result, cfg.plan, cfg.out);
  print_table(result);
  if (!result.all_checks_pass()) {
    std::cerr << "bound checks failed\n";
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Explore-explore-then-commit linear bandits on ellipsoids"};
  app.require_subcommand(1);

  Overrides run_o;
  std::string config_path;
  auto* run = app.add_subcommand("run", "Run an experiment described by a JSON config");
  run->add_option("config", config_path, "Config file")->required()->check(CLI::ExistingFile);
  add_overrides(run, run_o);

  Overrides norm_o;
  std::size_t norm_d = 3;
  std::vector<double> norms;
  auto* sweep_norm = app.add_subcommand("sweep-norm", "Final regret vs ||theta|| on the unit ball");
  sweep_norm->add_option("--d", norm_d, "Dimension")->check(CLI::PositiveNumber);
  sweep_norm->add_option("--norms", norms, "Norms (default: d/sqrt(T), 0.1, 1, 10, 25, 50)")->delimiter(',');
  add_overrides(sweep_norm, norm_o);

  Overrides dim_o;
  double dim_norm = 10.0;
  std::vector<std::size_t> dims{2, 10, 20, 30, 40, 50, 60, 70, 80, 90};
  auto* sweep_dim = app.add_subcommand("sweep-dim", "Final regret vs dimension on the unit ball");
  sweep_dim->add_option("--norm", dim_norm, "||theta||_2")->check(CLI::PositiveNumber);
  sweep_dim->add_option("--dims", dims, "Dimensions")->delimiter(',');
  add_overrides(sweep_dim, dim_o);

  std::size_t b_d = 2;
  double b_sigma = 1.0, b_t = 1e4, b_norm = 1.0;
  auto* bounds = app.add_subcommand("bounds", "Evaluate the closed-form guarantees");
  bounds->add_option("--d", b_d, "Dimension")->check(CLI::PositiveNumber);
  bounds->add_option("--sigma", b_sigma, "Noise level")->check(CLI::NonNegativeNumber);
  bounds->add_option("--T", b_t, "Horizon")->check(CLI::NonNegativeNumber);
  bounds->add_option("--norm", b_norm, "||theta||_A")->check(CLI::PositiveNumber);

  std::string bench_policy = "e2tc";
  std::size_t bench_d = 100, bench_t = 100000;
  double bench_norm = 1.0;
  std::uint64_t bench_seed = 0;
  auto* bench = app.add_subcommand("bench", "Time one episode");
  bench->add_option("--policy", bench_policy, "Policy spec");
  bench->add_option("--d", bench_d, "Dimension")->check(CLI::PositiveNumber);
  bench->add_option("--T", bench_t, "Horizon")->check(CLI::PositiveNumber);
  bench->add_option("--norm", bench_norm, "||theta||_2")->check(CLI::PositiveNumber);
  bench->add_option("--seed", bench_seed, "Seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      std::ifstream in(config_path);
      json doc;
      try {
        doc = json::parse(in);
      } catch (const json::parse_error& e) {
        throw ConfigError(std::string("cannot parse ") + config_path + ": " + e.what());
      }
      return execute(apply_overrides(std::move(doc), run_o));
    }
    if (*sweep_norm) {
      const double t = static_cast<double>(norm_o.horizon.value_or(10000));
      if (norms.empty()) norms = {static_cast<double>(norm_d) / std::sqrt(t), 0.1, 1.0, 10.0, 25.0, 50.0};
      json doc = {{"experiment_id", "norm-sweep"},
                  {"T", 10000},
                  {"runs", 20},
                  {"sigma", 1.0},
                  {"action_set", {{"shape", "ball"}}},
                  {"instances", {{"kind", "norm_sweep"}, {"d", norm_d}, {"norms", norms}}},
                  {"policies", {"e2tc:1", "e2tc:3"}}};
      return execute(apply_overrides(std::move(doc), norm_o));
    }
    if (*sweep_dim) {
      json doc = {{"experiment_id", "dim-sweep"},
                  {"T", 10000},
                  {"runs", 20},
                  {"sigma", 1.0},
                  {"action_set", {{"shape", "ball"}}},
                  {"instances", {{"kind", "dim_sweep"}, {"norm", dim_norm}, {"dims", dims}}},
                  {"policies", {"e2tc:1", "e2tc:3"}}};
      return execute(apply_overrides(std::move(doc), dim_o));
    }
    if (*bounds) {
      const json out = {{"d", b_d},
                        {"sigma", b_sigma},
                        {"T", b_t},
                        {"norm", b_norm},
                        {"centered_regret_rhs", centered_regret_rhs(b_d, b_sigma, b_t, b_norm)},
                        {"translated_regret_rhs", translated_regret_rhs(b_d, b_sigma, b_t, b_norm)},
                        {"warmup_failure_rhs", b_t > 0 ? warmup_failure_rhs(b_d, b_sigma, b_t, b_norm) : 1.0},
                        {"warmup_length_rhs", warmup_length_rhs(b_d, b_sigma, b_t, b_norm)},
                        {"lower_bound", minimax_lower_bound(b_d, b_sigma, b_t, b_norm)}};
      std::cout << out.dump(2) << '\n';
      return 0;
    }
    if (*bench) {
      const RuntimeReport r = runtime_probe(parse_policy_spec(bench_policy), bench_d, bench_t, bench_norm, bench_seed);
      json phases = json::array();
      for (const PhaseTiming& p : r.phases) phases.push_back({{"phase", p.phase}, {"steps", p.steps}, {"seconds", p.seconds}});
      const json out = {{"policy", r.policy},       {"d", r.d},
                        {"T", r.horizon},           {"seconds", r.seconds},
                        {"ns_per_step", r.ns_per_step}, {"total_regret", r.total_regret},
                        {"phases", phases}};
      std::cout << out.dump(2) << '\n';
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
