// Minimax-CombSAR: optional uniform initialization, then ceil(log2 d) halving
// rounds over an enumerated action class. Each round computes an allocation
// vector on the arm simplex, samples accordingly, and keeps the top half of
// the active actions by estimated value.
#pragma once

#include <cstdint>
#include <vector>

#include "rcpe/core.hpp"

namespace rcpe {

enum class AllocationMode { kLagrange, kMinimax };

/// Point of the arm simplex: nonnegative weights summing to 1.
struct AllocationVector {
  std::vector<double> weights;
};

/// Round-r sampling mass m(r) = (T' - d*ceil(log2 d)) / (B / 2^(r-1)) with
/// B = 2^ceil(log2 d) - 1. Real-valued; per-arm pulls are ceil(p_s * m(r)).
/// Throws InsufficientBudgetError when T' <= d * ceil(log2 d).
double phase_budget(std::int64_t t_prime, std::size_t d, std::size_t r);

/// lambda of a pair at allocation p: sum_s (pi_a_s - pi_b_s)^2 / (p_s * m).
double pair_lambda(const ActionVector& a, const ActionVector& b,
                   const std::vector<double>& p, double m);

/// Closed-form allocation: picks the pair maximizing lambda at the uniform
/// allocation (ties: lexicographically first pair) and returns its normalized
/// absolute-difference vector. Coordinates where the pair agrees get weight
/// zero. Throws DegenerateInstanceError when all pairs are identical.
AllocationVector allocation_lagrange(const std::vector<ActionVector>& active,
                                     const PullLog& log, double m);

/// Index pair maximizing lambda at the uniform allocation; serial scan.
/// Reference for the OpenMP kernel used by allocation_lagrange.
std::pair<std::size_t, std::size_t> lambda_argmax_pair_reference(
    const std::vector<ActionVector>& active);
std::pair<std::size_t, std::size_t> lambda_argmax_pair(const std::vector<ActionVector>& active);

/// Worst-pair dispersion at allocation p, the minimax objective:
///   max over active pairs of sum_s (pi_a_s - pi_b_s)^2 / (T_s + p_s * m).
/// Continuous relaxation of the pull-count form (ceilings apply when pulling,
/// not when optimizing); +inf when a needed coordinate has zero mass and no
/// prior pulls.
double kappa_max(const std::vector<ActionVector>& active, const PullLog& log, double m,
                 const std::vector<double>& p);

struct MinimaxAllocation {
  AllocationVector allocation;
  double objective = 0.0;
  bool hit_iteration_cap = false;
};

/// Solves min over the simplex of kappa_max (a convex program): 500
/// projected-subgradient steps (step 1/sqrt(iter), best iterate kept), a
/// deterministic pairwise mass-transfer polish, and a nested ternary search
/// that is effectively exact when at most three coordinates matter.
MinimaxAllocation allocation_minimax(const std::vector<ActionVector>& active,
                                     const PullLog& log, double m);

/// Keeps the ceil(d / 2^r) actions with the largest estimates; ties survive
/// by lower original index. Returns surviving positions of `active` in
/// ascending order.
std::vector<std::size_t> eliminate(const std::vector<double>& estimates,
                                   const std::vector<std::size_t>& original_index,
                                   std::size_t d, std::size_t r);

struct CombsarResult {
  ActionVector output;
  std::int64_t pulls_used = 0;
  std::vector<std::size_t> active_counts;  // |A(2)|, ..., |A(R+1)|
  bool schedule_exact = true;    // every round kept exactly ceil(d/2^r)
  bool budget_clamped = false;   // sampling stopped early at exactly T
  PullLog log;
};

/// Full run. Requires 0 <= beta <= 1 and, when d > 1, a budget large enough
/// that T' = T - floor(T*beta/d)*d exceeds d*ceil(log2 d). Never pulls more
/// than `budget` times.
CombsarResult run_minimax_combsar(const BanditInstance& instance,
                                  const std::vector<ActionVector>& actions,
                                  std::int64_t budget, double beta, AllocationMode mode,
                                  RewardStream& rng);

}  // namespace rcpe
