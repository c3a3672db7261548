#include "rcpe/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "rcpe/csa.hpp"
#include "rcpe/metrics.hpp"
#include "rcpe/oracles.hpp"
#include "rcpe/parallel.hpp"

namespace rcpe {

BanditInstance gen_knapsack_instance(std::size_t d, RewardStream& rng) {
  KnapsackSpec spec;
  spec.capacity = 200;
  spec.weights.resize(d);
  for (std::size_t s = 0; s < d; ++s) spec.weights[s] = rng.uniform_int(1, 200);
  std::vector<double> mu(d);
  for (std::size_t s = 0; s < d; ++s) {
    mu[s] = static_cast<double>(spec.weights[s]) * rng.uniform_real(1.0, 1.1);
  }
  return BanditInstance{d, std::move(mu), 1.0, std::move(spec)};
}

std::vector<ActionVector> gen_enumerated_actions(const BanditInstance& instance, std::size_t n,
                                                 RewardStream& rng) {
  const auto* spec = std::get_if<KnapsackSpec>(&instance.spec);
  if (spec == nullptr) {
    throw InvalidSpecError("gen_enumerated_actions: knapsack instance required");
  }
  const std::size_t d = instance.d;
  std::vector<ActionVector> actions;
  std::set<std::vector<std::int64_t>> seen;  // integer counts, exact dedup
  std::vector<double> perturbed(d);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t s = 0; s < d; ++s) {
      const auto w = static_cast<double>(spec->weights[s]);
      perturbed[s] = rng.uniform_real(w, 1.1 * w);
    }
    ActionVector pi = solve_knapsack(perturbed, spec->weights, spec->capacity);
    std::vector<std::int64_t> key(d);
    for (std::size_t s = 0; s < d; ++s) key[s] = std::llround(pi[s]);
    if (seen.insert(std::move(key)).second) actions.push_back(std::move(pi));
  }
  return actions;
}

std::string AlgoConfig::label() const {
  if (name == "csa") return name;
  std::ostringstream out;
  out << name << "(beta=" << beta << ","
      << (alloc == AllocationMode::kLagrange ? "lagrange" : "minimax") << ")";
  return out.str();
}

void validate(const SweepConfig& config) {
  if (config.dims.empty() || config.budgets.empty()) {
    throw InvalidSpecError("sweep: dims and budgets must be nonempty");
  }
  if (config.trials < 1) throw InvalidSpecError("sweep: trials must be >= 1");
  if (config.algos.empty()) throw InvalidSpecError("sweep: no algorithms configured");
  if (config.family != "knapsack-exp" && config.family != "knapsack-poly") {
    throw InvalidSpecError("sweep: unknown family '" + config.family + "'");
  }
  for (const auto& algo : config.algos) {
    if (algo.name != "csa" && algo.name != "combsar") {
      throw InvalidSpecError("sweep: unknown algorithm '" + algo.name + "'");
    }
    if (algo.name == "combsar" && config.family != "knapsack-poly") {
      throw InvalidSpecError("sweep: combsar needs an enumerable class (knapsack-poly)");
    }
  }
}

namespace {

struct TrialOutcome {
  TrialRecord record;
  bool ran_combsar = false;
  bool schedule_ok = true;
};

TrialOutcome run_one_trial(const SweepConfig& config, const AlgoConfig& algo, std::size_t d,
                           std::int64_t budget, std::size_t trial) {
  TrialOutcome outcome;
  TrialRecord& rec = outcome.record;
  rec.algo = algo.label();
  rec.d = d;
  rec.budget = budget;

  // Instance (and class) seeds depend only on (master, d, trial) so cells
  // with different budgets or algorithms run on matched instances.
  const std::uint64_t instance_seed =
      derive_seed(config.master_seed, {hash_str("instance"), d, trial});
  RewardStream instance_rng(instance_seed);
  BanditInstance instance = gen_knapsack_instance(d, instance_rng);
  if (config.sigma_override) instance.noise_sigma = *config.sigma_override;

  rec.seed = derive_seed(config.master_seed,
                         {d, static_cast<std::uint64_t>(budget), hash_str(algo.label()), trial});
  RewardStream run_rng(rec.seed);

  try {
    const auto t0 = std::chrono::steady_clock::now();
    ActionVector truth;
    if (config.family == "knapsack-exp") {
      const auto& ks = std::get<KnapsackSpec>(instance.spec);
      truth = solve_knapsack(instance.mu, ks.weights, ks.capacity);
      CsaResult r = run_csa(instance, budget, run_rng);
      rec.pulls = r.pulls_used;
      if (!r.output.is_bottom()) rec.output = *r.output.action;
    } else {
      RewardStream actions_rng(derive_seed(config.master_seed, {hash_str("actions"), d, trial}));
      const std::vector<ActionVector> actions =
          gen_enumerated_actions(instance, config.n_actions, actions_rng);
      truth = best_action_bruteforce(instance.mu, actions);
      BanditInstance enumerated{instance.d, instance.mu, instance.noise_sigma,
                                EnumeratedSpec{actions}};
      if (algo.name == "csa") {
        CsaResult r = run_csa(enumerated, budget, run_rng);
        rec.pulls = r.pulls_used;
        if (!r.output.is_bottom()) rec.output = *r.output.action;
      } else {
        CombsarResult r =
            run_minimax_combsar(enumerated, actions, budget, algo.beta, algo.alloc, run_rng);
        rec.pulls = r.pulls_used;
        rec.output = r.output;
        outcome.ran_combsar = true;
        // The exact halving schedule is only well-posed when the class is at
        // least as large as the first quota.
        const std::size_t first_quota = (d + 1) / 2;
        outcome.schedule_ok =
            !r.budget_clamped && (actions.size() < std::max<std::size_t>(first_quota, 2) ||
                                  r.schedule_exact);
      }
    }
    const auto t1 = std::chrono::steady_clock::now();
    rec.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    rec.correct = rec.output.has_value() && action_eq(*rec.output, truth);
  } catch (const std::exception& e) {
    rec.output.reset();
    rec.correct = false;
    outcome.schedule_ok = false;
#pragma omp critical
    std::cerr << "trial failed (" << rec.algo << ", d=" << d << ", T=" << budget
              << ", trial=" << trial << "): " << e.what() << "\n";
  }
  return outcome;
}

}  // namespace

SweepResult run_sweep(const SweepConfig& config) {
  validate(config);

  struct Cell {
    std::size_t algo, d_idx, t_idx, trial;
  };
  std::vector<Cell> cells;
  for (std::size_t a = 0; a < config.algos.size(); ++a) {
    for (std::size_t di = 0; di < config.dims.size(); ++di) {
      for (std::size_t ti = 0; ti < config.budgets.size(); ++ti) {
        for (std::size_t k = 0; k < config.trials; ++k) cells.push_back({a, di, ti, k});
      }
    }
  }

  std::vector<TrialOutcome> outcomes(cells.size());
#pragma omp parallel for schedule(dynamic) num_threads(max_threads())
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(cells.size()); ++i) {
    const Cell& c = cells[static_cast<std::size_t>(i)];
    outcomes[static_cast<std::size_t>(i)] =
        run_one_trial(config, config.algos[c.algo], config.dims[c.d_idx],
                      config.budgets[c.t_idx], c.trial);
  }

  SweepResult result;
  result.records.reserve(outcomes.size());
  for (auto& o : outcomes) {
    if (o.ran_combsar) {
      ++result.combsar_runs;
      if (!o.schedule_ok) ++result.schedule_violations;
    }
    result.records.push_back(std::move(o.record));
  }
  return result;
}

namespace {
std::string format_double(double v, const char* fmt) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}
}  // namespace

std::string sweep_csv(const SweepConfig& config, const SweepResult& result) {
  std::ostringstream out;
  out << "algo,d,T,beta,alloc,trials,successes,success_rate,mean_pulls,mean_ms\n";
  std::size_t idx = 0;
  for (const auto& algo : config.algos) {
    for (std::size_t d : config.dims) {
      for (std::int64_t budget : config.budgets) {
        std::int64_t successes = 0;
        double pulls = 0.0, ms = 0.0;
        for (std::size_t k = 0; k < config.trials; ++k, ++idx) {
          const TrialRecord& r = result.records.at(idx);
          successes += r.correct ? 1 : 0;
          pulls += static_cast<double>(r.pulls);
          ms += r.wall_ms;
        }
        const auto n = static_cast<double>(config.trials);
        out << algo.name << ',' << d << ',' << budget << ',';
        if (algo.name == "combsar") {
          out << format_double(algo.beta, "%.10g") << ','
              << (algo.alloc == AllocationMode::kLagrange ? "lagrange" : "minimax");
        } else {
          out << ',';
        }
        out << ',' << config.trials << ',' << successes << ','
            << format_double(static_cast<double>(successes) / n, "%.10g") << ','
            << format_double(pulls / n, "%.10g") << ',' << format_double(ms / n, "%.3f")
            << '\n';
      }
    }
  }
  return out.str();
}

std::string plot_series_csv(const std::vector<TrialRecord>& records) {
  std::ostringstream out;
  out << "algo,T,d,success_rate\n";
  if (records.empty()) {
    std::cerr << "plot_series_csv: no records, emitting empty table\n";
    return out.str();
  }
  std::map<std::pair<std::string, std::int64_t>, std::map<std::size_t, std::pair<std::int64_t, std::int64_t>>>
      series;  // (algo, T) -> d -> (successes, trials)
  for (const auto& r : records) {
    auto& cell = series[{r.algo, r.budget}][r.d];
    cell.first += r.correct ? 1 : 0;
    cell.second += 1;
  }
  for (const auto& [key, points] : series) {
    for (const auto& [d, cell] : points) {
      out << key.first << ',' << key.second << ',' << d << ','
          << format_double(static_cast<double>(cell.first) / static_cast<double>(cell.second),
                           "%.10g")
          << '\n';
    }
  }
  return out.str();
}

}  // namespace rcpe
