#include "rcpe/csa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rcpe/parallel.hpp"

namespace rcpe {

std::vector<std::int64_t> phase_schedule(std::int64_t budget, std::size_t d) {
  if (d < 1) throw InvalidSpecError("phase_schedule: d must be >= 1");
  if (budget <= static_cast<std::int64_t>(d)) {
    throw InsufficientBudgetError("phase_schedule: budget must exceed d");
  }
  double hlog = 0.0;
  for (std::size_t i = 1; i <= d; ++i) hlog += 1.0 / static_cast<double>(i);
  std::vector<std::int64_t> schedule(d);
  const auto numer = static_cast<double>(budget - static_cast<std::int64_t>(d));
  for (std::size_t t = 1; t <= d; ++t) {
    schedule[t - 1] = static_cast<std::int64_t>(
        std::ceil(numer / (hlog * static_cast<double>(d - t + 1))));
  }
  return schedule;
}

std::size_t select_assign_arm(const std::vector<double>& mu_hat, const ActionVector& pi_hat,
                              const std::vector<std::optional<ActionVector>>& alternatives,
                              const std::vector<char>& active) {
  const double inf = std::numeric_limits<double>::infinity();
  std::size_t best_arm = mu_hat.size();
  double best_score = -inf;
  for (std::size_t e = 0; e < mu_hat.size(); ++e) {
    if (!active[e]) continue;
    double score = inf;  // no alternative: the coordinate is forced
    if (alternatives[e].has_value()) {
      const ActionVector& alt = *alternatives[e];
      double num = 0.0;
      for (std::size_t s = 0; s < mu_hat.size(); ++s) num += mu_hat[s] * (pi_hat[s] - alt[s]);
      score = num / std::abs(pi_hat[e] - alt[e]);
    }
    if (best_arm == mu_hat.size() || score > best_score) {
      best_score = score;
      best_arm = e;
    }
  }
  if (best_arm == mu_hat.size()) throw InvalidSpecError("select_assign_arm: no active arm");
  return best_arm;
}

std::vector<std::optional<ActionVector>> probe_alternatives_reference(
    const ActionClassSpec& spec, const std::vector<double>& mu_hat, const ActionVector& pi_hat,
    const AssignmentSet& s, const std::vector<char>& active) {
  const std::size_t d = mu_hat.size();
  std::vector<std::optional<ActionVector>> alts(d);

  std::vector<std::size_t> active_arms;
  for (std::size_t e = 0; e < d; ++e) {
    if (active[e]) active_arms.push_back(e);
  }

#pragma omp parallel for schedule(dynamic) num_threads(max_threads())
  for (std::ptrdiff_t ap = 0; ap < static_cast<std::ptrdiff_t>(active_arms.size()); ++ap) {
    const std::size_t e = active_arms[static_cast<std::size_t>(ap)];
    std::optional<ActionVector> best;
    double best_value = -std::numeric_limits<double>::infinity();
    for (double x : possible_pi(spec, e)) {
      if (std::abs(x - pi_hat[e]) <= kActionTol) continue;
      AssignmentSet probe = s;
      probe.assign(e, x);
      OracleResult r = coracle(spec, mu_hat, probe);
      if (r.is_bottom()) continue;
      const double v = expected_value(mu_hat, *r.action);
      if (!best || v > best_value) {  // equal values keep the lower x
        best_value = v;
        best = std::move(r.action);
      }
    }
    alts[e] = std::move(best);
  }
  return alts;
}

namespace {

// Enumerated classes admit a single pass: score each action matching S once,
// then keep the best scorer per (arm, differing value). Matches the reference
// probe loop exactly, including its tie order (value desc, then x asc, then
// list index asc).
std::vector<std::optional<ActionVector>> probe_alternatives_enumerated(
    const EnumeratedSpec& spec, const std::vector<double>& mu_hat, const ActionVector& pi_hat,
    const AssignmentSet& s, const std::vector<char>& active) {
  const std::size_t d = mu_hat.size();
  std::vector<std::optional<ActionVector>> alts(d);
  std::vector<const ActionVector*> best(d, nullptr);
  std::vector<double> best_value(d, 0.0);

  for (const auto& action : spec.actions) {
    bool matches = true;
    for (const auto& [arm, x] : s.pairs()) {
      if (std::abs(action[arm] - x) > kActionTol) {
        matches = false;
        break;
      }
    }
    if (!matches) continue;
    const double value = expected_value(mu_hat, action);
    for (std::size_t e = 0; e < d; ++e) {
      if (!active[e]) continue;
      if (std::abs(action[e] - pi_hat[e]) <= kActionTol) continue;
      if (best[e] == nullptr || value > best_value[e] ||
          (value == best_value[e] && action[e] < (*best[e])[e])) {
        best[e] = &action;
        best_value[e] = value;
      }
    }
  }
  for (std::size_t e = 0; e < d; ++e) {
    if (best[e] != nullptr) alts[e] = *best[e];
  }
  return alts;
}

}  // namespace

std::vector<std::optional<ActionVector>> probe_alternatives(const ActionClassSpec& spec,
                                                            const std::vector<double>& mu_hat,
                                                            const ActionVector& pi_hat,
                                                            const AssignmentSet& s,
                                                            const std::vector<char>& active) {
  if (const auto* e = std::get_if<EnumeratedSpec>(&spec)) {
    return probe_alternatives_enumerated(*e, mu_hat, pi_hat, s, active);
  }
  return probe_alternatives_reference(spec, mu_hat, pi_hat, s, active);
}

CsaResult run_csa(const BanditInstance& instance, std::int64_t budget, RewardStream& rng) {
  validate(instance);
  const std::size_t d = instance.d;
  const std::vector<std::int64_t> schedule = phase_schedule(budget, d);

  CsaResult result;
  PullLog log(d);
  AssignmentSet assignments;
  std::vector<char> active(d, 1);

  for (std::size_t t = 1; t <= d; ++t) {
    const std::int64_t prev = (t >= 2) ? schedule[t - 2] : 0;
    const std::int64_t per_arm = schedule[t - 1] - prev;
    for (std::size_t e = 0; e < d; ++e) {
      if (!active[e]) continue;
      for (std::int64_t k = 0; k < per_arm; ++k) log.record(e, sample_reward(instance, e, rng));
    }

    const std::vector<double> mu_hat = empirical_means_dense(log);
    OracleResult incumbent = coracle(instance.spec, mu_hat, assignments);
    if (incumbent.is_bottom()) {
      result.output = OracleResult::bottom();
      result.pulls_used = log.total;
      result.log = std::move(log);
      return result;  // Fail
    }
    const ActionVector& pi_hat = *incumbent.action;

    const auto alternatives = probe_alternatives(instance.spec, mu_hat, pi_hat, assignments, active);
    const std::size_t p = select_assign_arm(mu_hat, pi_hat, alternatives, active);
    active[p] = 0;
    assignments.assign(p, pi_hat[p]);
    result.assign_order.push_back(p);
  }

  ActionVector out(d, 0.0);
  for (const auto& [arm, x] : assignments.pairs()) out[arm] = x;
  result.output = OracleResult::of(std::move(out));
  result.pulls_used = log.total;
  result.assignments = assignments;
  result.log = std::move(log);
  return result;
}

}  // namespace rcpe
