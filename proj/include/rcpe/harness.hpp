// Experiment harness: instance generators for the knapsack studies, batch
// trial execution over a (d, T) grid with per-cell derived seeds, and CSV
// emission for success-rate curves.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rcpe/combsar.hpp"
#include "rcpe/core.hpp"

namespace rcpe {

/// Knapsack instance per the exponential-class protocol: weights uniform on
/// {1..200}, value of item s = w_s * Uniform[1.0, 1.1], capacity 200,
/// unit Gaussian noise.
BanditInstance gen_knapsack_instance(std::size_t d, RewardStream& rng);

/// Polynomial action class: n value perturbations v'_s ~ Uniform[w_s, 1.1 w_s]
/// each solved exactly; duplicate solutions dropped, so the result has at most
/// n actions, all capacity-feasible.
std::vector<ActionVector> gen_enumerated_actions(const BanditInstance& instance, std::size_t n,
                                                 RewardStream& rng);

struct AlgoConfig {
  std::string name;  // "csa" or "combsar"
  double beta = 0.2;
  AllocationMode alloc = AllocationMode::kLagrange;

  std::string label() const;
};

struct SweepConfig {
  std::vector<std::size_t> dims;
  std::vector<std::int64_t> budgets;
  std::size_t trials = 1;
  std::vector<AlgoConfig> algos;
  std::uint64_t master_seed = 0;
  std::string family;  // "knapsack-exp" | "knapsack-poly"
  std::optional<double> sigma_override;
  std::size_t n_actions = 2000;
};

struct TrialRecord {
  std::string algo;
  std::size_t d = 0;
  std::int64_t budget = 0;
  std::uint64_t seed = 0;
  std::int64_t pulls = 0;
  std::optional<ActionVector> output;
  bool correct = false;
  double wall_ms = 0.0;
};

struct SweepResult {
  std::vector<TrialRecord> records;
  // Elimination-schedule bookkeeping across all combsar runs (in-run checks).
  std::int64_t combsar_runs = 0;
  std::int64_t schedule_violations = 0;
};

void validate(const SweepConfig& config);

/// Runs every (algo, d, T, trial) cell. Trials execute in parallel; output is
/// a pure function of the config (records ordered by algo, d, T, trial).
/// Per-trial failures are recorded as incorrect trials, never aborts.
SweepResult run_sweep(const SweepConfig& config);

/// Aggregate CSV, one row per (algo, d, T) cell:
///   algo,d,T,beta,alloc,trials,successes,success_rate,mean_pulls,mean_ms
/// All columns except mean_ms are a pure function of the config.
std::string sweep_csv(const SweepConfig& config, const SweepResult& result);

/// Plot-ready series, one per (algorithm, T): rows algo,T,d,success_rate with
/// exact fractions. Empty input yields a header-only table and a warning on
/// stderr.
std::string plot_series_csv(const std::vector<TrialRecord>& records);

}  // namespace rcpe
