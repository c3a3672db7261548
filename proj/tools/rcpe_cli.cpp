// Command-line front end: instance generation, action-class sampling, single
// algorithm runs, grid sweeps, and hardness metrics.
//
//   rcpe gen --family knapsack --d 20 --seed 1 -o instance.json
//   rcpe actions --instance instance.json --n 2000 --seed 2 -o actions.json
//   rcpe run --algo csa --instance instance.json --budget 20000 --seed 3
//   rcpe run --algo combsar --instance instance.json --actions actions.json \
//            --budget 50000 --beta 0.2 --alloc lagrange --seed 3
//   rcpe sweep --config sweep.json -o results.csv [--plot-out series.csv]
//   rcpe metrics --instance instance.json [--actions actions.json]
//
// CPE_THREADS caps OpenMP parallelism. All files are UTF-8, CSV uses '.' as
// the decimal separator.
#include <chrono>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "rcpe/combsar.hpp"
#include "rcpe/csa.hpp"
#include "rcpe/harness.hpp"
#include "rcpe/json_io.hpp"
#include "rcpe/metrics.hpp"
#include "rcpe/oracles.hpp"

namespace {

using namespace rcpe;

ActionVector ground_truth(const BanditInstance& instance) {
  if (const auto* k = std::get_if<KnapsackSpec>(&instance.spec)) {
    return solve_knapsack(instance.mu, k->weights, k->capacity);
  }
  if (const auto* t = std::get_if<TransportSpec>(&instance.spec)) {
    std::vector<double> cost(instance.d);
    for (std::size_t e = 0; e < instance.d; ++e) cost[e] = -instance.mu[e];
    return solve_transport(cost, t->supplies, t->demands);
  }
  return best_action_bruteforce(instance.mu, std::get<EnumeratedSpec>(instance.spec).actions);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"real-valued combinatorial pure exploration bandits"};
  app.require_subcommand(1);

  // --- gen ---
  auto* gen = app.add_subcommand("gen", "generate a random bandit instance");
  std::string gen_family = "knapsack";
  std::size_t gen_d = 10;
  std::uint64_t gen_seed = 0;
  std::string gen_out = "instance.json";
  double gen_sigma = -1.0;
  gen->add_option("--family", gen_family, "instance family (knapsack)");
  gen->add_option("--d", gen_d, "number of arms")->required();
  gen->add_option("--seed", gen_seed, "generator seed");
  gen->add_option("-o,--out", gen_out, "output path");
  gen->add_option("--sigma", gen_sigma, "override noise level (default 1.0)");

  // --- actions ---
  auto* actions_cmd = app.add_subcommand("actions", "sample an enumerated action class");
  std::string act_instance;
  std::size_t act_n = 2000;
  std::uint64_t act_seed = 0;
  std::string act_out = "actions.json";
  actions_cmd->add_option("--instance", act_instance, "instance json")->required();
  actions_cmd->add_option("--n", act_n, "number of sampled solutions");
  actions_cmd->add_option("--seed", act_seed, "sampler seed");
  actions_cmd->add_option("-o,--out", act_out, "output path");

  // --- run ---
  auto* run = app.add_subcommand("run", "run one algorithm trial, print a TrialRecord line");
  std::string run_algo;
  std::string run_instance;
  std::string run_actions;
  std::int64_t run_budget = 0;
  std::uint64_t run_seed = 0;
  double run_beta = 0.2;
  std::string run_alloc = "lagrange";
  run->add_option("--algo", run_algo, "csa | combsar")->required();
  run->add_option("--instance", run_instance, "instance json")->required();
  run->add_option("--actions", run_actions, "enumerated action class json");
  run->add_option("--budget", run_budget, "pull budget T")->required();
  run->add_option("--seed", run_seed, "run seed");
  run->add_option("--beta", run_beta, "combsar initialization fraction");
  run->add_option("--alloc", run_alloc, "combsar allocation: lagrange | minimax");

  // --- sweep ---
  auto* sweep = app.add_subcommand("sweep", "run a (d, T) grid of trials");
  std::string sweep_config_path;
  std::string sweep_out = "results.csv";
  std::string sweep_plot_out;
  sweep->add_option("--config", sweep_config_path, "sweep config json")->required();
  sweep->add_option("-o,--out", sweep_out, "aggregate csv path");
  sweep->add_option("--plot-out", sweep_plot_out, "per-series csv path");

  // --- metrics ---
  auto* metrics = app.add_subcommand("metrics", "print the instance gap report as json");
  std::string met_instance;
  std::string met_actions;
  std::size_t met_cap = 1000000;
  metrics->add_option("--instance", met_instance, "instance json")->required();
  metrics->add_option("--actions", met_actions, "explicit action class json");
  metrics->add_option("--cap", met_cap, "enumeration cap for knapsack/transport classes");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      if (gen_family != "knapsack") {
        throw InvalidSpecError("gen: unknown family '" + gen_family + "'");
      }
      RewardStream rng(gen_seed);
      BanditInstance instance = gen_knapsack_instance(gen_d, rng);
      if (gen_sigma >= 0.0) instance.noise_sigma = gen_sigma;
      write_file(gen_out, instance_to_json(instance) + "\n");
    } else if (*actions_cmd) {
      const BanditInstance instance = instance_from_json(read_file(act_instance));
      RewardStream rng(act_seed);
      const auto actions = gen_enumerated_actions(instance, act_n, rng);
      write_file(act_out, actions_to_json(instance.d, actions) + "\n");
    } else if (*run) {
      BanditInstance instance = instance_from_json(read_file(run_instance));
      std::vector<ActionVector> actions;
      if (!run_actions.empty()) {
        actions = actions_from_json(read_file(run_actions), instance.d);
        instance.spec = EnumeratedSpec{actions};
        validate(instance);
      } else if (const auto* e = std::get_if<EnumeratedSpec>(&instance.spec)) {
        actions = e->actions;
      }

      TrialRecord record;
      record.algo = run_algo;
      record.d = instance.d;
      record.budget = run_budget;
      record.seed = run_seed;
      const ActionVector truth = ground_truth(instance);

      RewardStream rng(run_seed);
      const auto t0 = std::chrono::steady_clock::now();
      if (run_algo == "csa") {
        const CsaResult r = run_csa(instance, run_budget, rng);
        record.pulls = r.pulls_used;
        if (!r.output.is_bottom()) record.output = *r.output.action;
      } else if (run_algo == "combsar") {
        if (actions.empty()) {
          throw InvalidSpecError("run: combsar needs --actions or an enumerated instance");
        }
        const AllocationMode mode =
            run_alloc == "minimax" ? AllocationMode::kMinimax : AllocationMode::kLagrange;
        const CombsarResult r =
            run_minimax_combsar(instance, actions, run_budget, run_beta, mode, rng);
        record.pulls = r.pulls_used;
        record.output = r.output;
      } else {
        throw InvalidSpecError("run: unknown algorithm '" + run_algo + "'");
      }
      record.wall_ms = std::chrono::duration<double, std::milli>(
                           std::chrono::steady_clock::now() - t0)
                           .count();
      record.correct = record.output.has_value() && action_eq(*record.output, truth);
      std::cout << trial_record_to_json(record) << "\n";
    } else if (*sweep) {
      const SweepConfig config = sweep_config_from_json(read_file(sweep_config_path));
      const SweepResult result = run_sweep(config);
      write_file(sweep_out, sweep_csv(config, result));
      if (!sweep_plot_out.empty()) write_file(sweep_plot_out, plot_series_csv(result.records));
      if (result.schedule_violations > 0) {
        std::cerr << "warning: " << result.schedule_violations
                  << " combsar runs violated the elimination schedule\n";
      }
    } else if (*metrics) {
      const BanditInstance instance = instance_from_json(read_file(met_instance));
      std::vector<ActionVector> actions;
      if (!met_actions.empty()) {
        actions = actions_from_json(read_file(met_actions), instance.d);
      } else {
        auto enumerated = enumerate_action_class(instance.spec, met_cap);
        if (!enumerated) {
          std::cout << metrics_unavailable_json(
                           "action class exceeds the enumeration cap of " +
                           std::to_string(met_cap))
                    << "\n";
          return 0;
        }
        actions = std::move(*enumerated);
      }
      std::cout << gap_report_to_json(gap_report(instance.mu, actions)) << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
