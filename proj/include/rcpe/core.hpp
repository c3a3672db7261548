// Core model for real-valued combinatorial pure exploration bandits:
// action vectors, problem instances, reward sampling, and pull bookkeeping.
#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace rcpe {

/// A point of the action class: d nonnegative reals (item counts, flows, ...).
using ActionVector = std::vector<double>;

/// Absolute per-entry tolerance for action equality. Knapsack/transport
/// actions are integer-valued, so ties never straddle it; enumerated classes
/// built from solver output get robust float dedup.
inline constexpr double kActionTol = 1e-9;

bool action_eq(const ActionVector& a, const ActionVector& b);

/// Inner product mu^T pi. Throws on length mismatch.
double expected_value(const std::vector<double>& mu, const ActionVector& pi);

struct InvalidSpecError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct InsufficientBudgetError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct InfeasibleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DegenerateInstanceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Action class specifications

struct EnumeratedSpec {
  std::vector<ActionVector> actions;  // nonempty, pairwise distinct
};

struct KnapsackSpec {
  std::vector<std::int64_t> weights;  // all >= 1
  std::int64_t capacity = 0;
};

/// Integer transportation problem over m suppliers and n consumers.
/// Arms are edges; arm e maps to (i, j) = (e / n, e % n) row-major.
struct TransportSpec {
  std::vector<std::int64_t> supplies;  // length m, all >= 1
  std::vector<std::int64_t> demands;   // length n, all >= 1, balanced totals
};

using ActionClassSpec = std::variant<EnumeratedSpec, KnapsackSpec, TransportSpec>;

std::size_t spec_dimension(const ActionClassSpec& spec);

/// A stochastic instance: true means, Gaussian noise level (sigma == R), and
/// the combinatorial structure. Immutable after construction; safe to share
/// across threads.
struct BanditInstance {
  std::size_t d = 0;
  std::vector<double> mu;
  double noise_sigma = 0.0;
  ActionClassSpec spec;
};

/// Throws InvalidSpecError unless all instance invariants hold.
void validate(const BanditInstance& instance);

// ---------------------------------------------------------------------------
// Randomness

/// Deterministic seed derivation (splitmix64 chaining). Used to give every
/// trial/instance an independent stream from a master seed.
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> words);
std::uint64_t hash_str(const std::string& s);

/// One per-trial random stream. Single-owner mutable state.
class RewardStream {
 public:
  explicit RewardStream(std::uint64_t seed) : gen_(seed) {}

  double next_normal() { return normal_(gen_); }
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(gen_);
  }
  double uniform_real(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(gen_);
  }

 private:
  std::mt19937_64 gen_;
  std::normal_distribution<double> normal_;
};

/// One observation from arm `arm` (0-based): mu[arm] + sigma * z.
/// Deterministic given the stream state. Throws std::out_of_range.
double sample_reward(const BanditInstance& instance, std::size_t arm, RewardStream& rng);

// ---------------------------------------------------------------------------
// Pull bookkeeping

/// Per-arm pull counts and reward sums. Single-owner mutable state: one log
/// per trial run.
struct PullLog {
  std::vector<std::int64_t> counts;
  std::vector<double> sums;
  std::int64_t total = 0;

  explicit PullLog(std::size_t d = 0) : counts(d, 0), sums(d, 0.0) {}

  void record(std::size_t arm, double reward) {
    counts.at(arm) += 1;
    sums.at(arm) += reward;
    total += 1;
  }
};

/// Empirical means; entries with zero pulls are flagged undefined (never
/// silently zero -- that would corrupt oracle calls).
std::vector<std::optional<double>> empirical_means(const PullLog& log);

/// Dense means for contexts that guarantee every arm was pulled (e.g. CSA
/// after phase 1). Throws DegenerateInstanceError on an undefined entry.
std::vector<double> empirical_means_dense(const PullLog& log);

}  // namespace rcpe
