// Combinatorial Successive Assign: d phases of uniform sampling over the
// still-active arms; each phase queries the constrained oracle, probes every
// alternative value of every active coordinate, and permanently pins the
// coordinate with the largest empirical gap ratio.
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rcpe/core.hpp"
#include "rcpe/oracles.hpp"

namespace rcpe {

/// Cumulative per-phase pull targets:
///   schedule[t-1] = ceil((T - d) / (hlog(d) * (d - t + 1))),
/// with hlog(d) the d-th harmonic number. In phase t every active arm is
/// pulled schedule[t-1] - schedule[t-2] times; the realized total never
/// exceeds T. Throws InsufficientBudgetError when T <= d.
std::vector<std::int64_t> phase_schedule(std::int64_t budget, std::size_t d);

/// The arm whose best alternative is hardest to confuse with the incumbent:
/// argmax over active arms of <mu_hat, pi_hat - alt_e> / |pi_hat_e - alt_e_e|.
/// Arms with no alternative (every probe infeasible) score +inf, i.e. their
/// coordinate is forced. Ties go to the lowest index.
std::size_t select_assign_arm(const std::vector<double>& mu_hat, const ActionVector& pi_hat,
                              const std::vector<std::optional<ActionVector>>& alternatives,
                              const std::vector<char>& active);

/// Best-valued feasible probe per active arm: for each value x the coordinate
/// can take other than pi_hat_e, query the oracle with (e, x) pinned and keep
/// the highest-value non-Bottom result (ties: lowest x). Pure; probes run in
/// parallel. Enumerated specs use a single-pass batched scan; this per-probe
/// loop is the reference the batch is tested against.
std::vector<std::optional<ActionVector>> probe_alternatives_reference(
    const ActionClassSpec& spec, const std::vector<double>& mu_hat, const ActionVector& pi_hat,
    const AssignmentSet& s, const std::vector<char>& active);

std::vector<std::optional<ActionVector>> probe_alternatives(const ActionClassSpec& spec,
                                                            const std::vector<double>& mu_hat,
                                                            const ActionVector& pi_hat,
                                                            const AssignmentSet& s,
                                                            const std::vector<char>& active);

struct CsaResult {
  OracleResult output;
  std::int64_t pulls_used = 0;
  std::vector<std::size_t> assign_order;  // p(1), ..., p(d)
  AssignmentSet assignments;              // S(d+1); empty on Fail
  PullLog log;
};

/// Runs the full algorithm. Requires budget > d. Returns Bottom only through
/// the Fail branch (constrained oracle infeasible at the top of a phase).
CsaResult run_csa(const BanditInstance& instance, std::int64_t budget, RewardStream& rng);

}  // namespace rcpe
