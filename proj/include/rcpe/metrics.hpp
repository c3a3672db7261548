// Instance hardness quantities: per-coordinate gaps and the constants that
// drive the error bounds of both algorithms.
//
// Every quantity is a brute-force scan over an explicit action list. The
// production kernels use value-set reductions and OpenMP; *_reference
// implementations follow the defining formulas literally and are kept for
// testing and benchmarking against the kernels.
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rcpe/core.hpp"

namespace rcpe {

struct GapReport {
  std::vector<double> gaps;  // Delta_s; +inf when no action differs at s
  double H = 0.0;            // sum of Delta_s^-2 over defined gaps
  double H2 = 0.0;           // max_s s / Delta_(s)^2, gaps ascending
  double L = 0.0;            // max |pi1_e-pi2_e| / |pi1_e-pi3_e| over triples
  double U_A = 0.0;          // max_l1-to-coordinate ratio over action pairs
  double V = 0.0;            // max (l1 / linf)^2 over suboptimal actions
  double V_appendix = 0.0;   // unsquared per-coordinate variant of V
  ActionVector best;
};

/// Exhaustive argmax of mu^T pi; ties go to the lowest index. Kept as an
/// independent check of solve_enumerated.
ActionVector best_action_bruteforce(const std::vector<double>& mu,
                                    const std::vector<ActionVector>& actions);

/// Gap of coordinate s: min over actions differing from the best at s of
/// mu^T (pi* - pi) / |pi*_s - pi_s|. nullopt when no action differs at s.
/// Requires a unique best action.
std::optional<double> g_gap(const std::vector<double>& mu,
                            const std::vector<ActionVector>& actions, std::size_t s);

/// Full report. Throws DegenerateInstanceError when the best action is not
/// unique. `threads` > 1 parallelizes the coordinate/pair scans.
GapReport gap_report(const std::vector<double>& mu, const std::vector<ActionVector>& actions);

/// Serial formula-literal implementation (O(K^3 d) for L). Test oracle for
/// gap_report; do not use on large classes.
GapReport gap_report_reference(const std::vector<double>& mu,
                               const std::vector<ActionVector>& actions);

/// Enumerates the full integer action class of a knapsack/transport spec
/// (the feasible set; every member optimizes some value vector). Returns
/// nullopt when more than `cap` vectors would be produced. Enumerated specs
/// return their list verbatim.
std::optional<std::vector<ActionVector>> enumerate_action_class(const ActionClassSpec& spec,
                                                                std::size_t cap = 1000000);

}  // namespace rcpe
