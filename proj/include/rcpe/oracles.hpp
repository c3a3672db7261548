// Offline optimization oracles and their constrained (COracle) variants.
//
// The constrained oracle answers argmax_{pi in A_S} mu^T pi, where A_S pins
// chosen coordinates to fixed values, or Bottom when no feasible action
// remains. All functions here are pure and safe for concurrent use.
#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "rcpe/core.hpp"

namespace rcpe {

/// Set of (arm index, fixed value) pairs constraining a COracle query.
/// At most one pair per arm.
class AssignmentSet {
 public:
  void assign(std::size_t arm, double value);
  bool has_arm(std::size_t arm) const;
  std::optional<double> value_for(std::size_t arm) const;
  std::size_t size() const { return pairs_.size(); }
  bool empty() const { return pairs_.empty(); }

  /// Pairs ordered by arm index (deterministic iteration).
  const std::vector<std::pair<std::size_t, double>>& pairs() const { return pairs_; }

 private:
  std::vector<std::pair<std::size_t, double>> pairs_;
};

/// Either a feasible action satisfying every constraint it was queried with,
/// or Bottom (infeasible query).
struct OracleResult {
  std::optional<ActionVector> action;

  bool is_bottom() const { return !action.has_value(); }
  static OracleResult bottom() { return {}; }
  static OracleResult of(ActionVector a) { return {std::move(a)}; }
};

/// Unbounded knapsack via dynamic programming, O(d*W).
///
/// Maximizes sum values[s]*pi[s] subject to sum pi[s]*weights[s] <= capacity
/// over nonnegative integer counts. Items with value <= 0 are never taken, so
/// the solver is total over the negative empirical means the bandit
/// algorithms produce. Deterministic reconstruction: capacities ascending,
/// items ascending, equal objectives keep the incumbent.
ActionVector solve_knapsack(const std::vector<double>& values,
                            const std::vector<std::int64_t>& weights,
                            std::int64_t capacity);

/// Forbidden-edge sentinel for solve_transport (edge removed from the network).
double forbidden_cost();

/// Exact integer min-cost transportation plan (successive shortest augmenting
/// paths with potentials). Row sums equal supplies, column sums equal
/// demands; integrality follows from integral marginals.
///
/// cost is m*n row-major; entries equal to forbidden_cost() remove the edge.
/// Throws InvalidSpecError on unbalanced marginals, InfeasibleError when the
/// forbidden edges block every feasible routing.
ActionVector solve_transport(const std::vector<double>& cost,
                             const std::vector<std::int64_t>& supplies,
                             const std::vector<std::int64_t>& demands);

/// argmax mu^T pi over an explicit list; ties go to the lowest index.
ActionVector solve_enumerated(const std::vector<double>& mu,
                              const std::vector<ActionVector>& actions);

/// All values coordinate e can take across the action class, ascending.
/// Knapsack and transport use the feasibility superset ({0..floor(W/w_e)} and
/// {0..min(s_i, d_j)}); the COracle returns Bottom for unrealizable pins.
std::vector<double> possible_pi(const ActionClassSpec& spec, std::size_t e);

/// Constrained offline oracle. Returns Bottom exactly when no action
/// satisfies every pin in S; otherwise the returned action attains
/// max mu^T pi over the pinned class.
///
/// For transport specs mu holds rewards (negated edge costs), keeping the
/// argmax contract uniform across spec kinds.
OracleResult coracle(const ActionClassSpec& spec, const std::vector<double>& mu,
                     const AssignmentSet& s);

}  // namespace rcpe
