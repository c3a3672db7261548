// Acceptance suite: one pass/fail line per criterion. Exit status is the
// number of failed criteria.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "rcpe/combsar.hpp"
#include "rcpe/csa.hpp"
#include "rcpe/harness.hpp"
#include "rcpe/metrics.hpp"
#include "rcpe/oracles.hpp"
#include "test_support.hpp"

using namespace rcpe;
namespace ts = rcpe::testing;

namespace {

struct ScheduleStats {
  std::int64_t runs = 0;
  std::int64_t violations = 0;
  std::int64_t multi_survivor = 0;

  void absorb(const CombsarResult& r, std::size_t class_size, std::size_t d) {
    ++runs;
    const std::size_t first_quota = (d + 1) / 2;
    if (class_size >= std::max<std::size_t>(first_quota, 2) && !r.schedule_exact) ++violations;
    if (r.budget_clamped) ++violations;
  }
};

ScheduleStats g_schedule;

BanditInstance random_instance_any_kind(RewardStream& rng, int kind, double sigma) {
  if (kind == 0) return ts::random_knapsack_instance(rng, 20, 40, sigma);
  if (kind == 1) return ts::random_transport_instance(rng, 4, sigma);
  return ts::random_enumerated_instance(rng, 1, 20, 20, sigma);
}

bool criterion_csa_budget(std::string& detail) {
  RewardStream rng(1001);
  int violations = 0;
  for (int rep = 0; rep < 100; ++rep) {
    const BanditInstance inst = random_instance_any_kind(rng, rep % 3, 1.0);
    const std::int64_t budget =
        rng.uniform_int(static_cast<std::int64_t>(inst.d) + 1, 10000);
    RewardStream run_rng(derive_seed(1001, {static_cast<std::uint64_t>(rep)}));
    const CsaResult r = run_csa(inst, budget, run_rng);
    if (r.pulls_used > budget) ++violations;
  }
  detail = "100 runs, " + std::to_string(violations) + " budget violations";
  return violations == 0;
}

bool criterion_combsar_budget(std::string& detail) {
  RewardStream rng(2002);
  int violations = 0;
  for (int rep = 0; rep < 100; ++rep) {
    const BanditInstance inst = ts::random_enumerated_instance(rng, 1, 20, 20, 1.0);
    const auto& actions = std::get<EnumeratedSpec>(inst.spec).actions;
    const double beta = (rep % 3) * 0.2;
    std::size_t rounds = 0;
    while ((std::size_t{1} << rounds) < inst.d) ++rounds;
    std::int64_t budget = 0;
    for (;;) {
      budget = rng.uniform_int(static_cast<std::int64_t>(inst.d) + 1, 10000);
      const auto init = static_cast<std::int64_t>(
          std::floor(static_cast<double>(budget) / static_cast<double>(inst.d) * beta));
      const std::int64_t t_prime = budget - init * static_cast<std::int64_t>(inst.d);
      if (rounds == 0 || t_prime > static_cast<std::int64_t>(inst.d * rounds)) break;
    }
    RewardStream run_rng(derive_seed(2002, {static_cast<std::uint64_t>(rep)}));
    const CombsarResult r =
        run_minimax_combsar(inst, actions, budget, beta, AllocationMode::kLagrange, run_rng);
    if (r.pulls_used > budget) ++violations;
    g_schedule.absorb(r, actions.size(), inst.d);
  }
  detail = "100 runs, " + std::to_string(violations) + " budget violations";
  return violations == 0;
}

bool criterion_zero_noise(std::string& detail) {
  RewardStream rng(3003);
  int csa_hits = 0, combsar_hits = 0;
  const int n = 50;
  for (int rep = 0; rep < n; ++rep) {
    const BanditInstance inst = ts::random_enumerated_instance(rng, 2, 8, 20, 0.0);
    const auto& actions = std::get<EnumeratedSpec>(inst.spec).actions;
    const ActionVector truth = best_action_bruteforce(inst.mu, actions);

    RewardStream csa_rng(derive_seed(3003, {1, static_cast<std::uint64_t>(rep)}));
    const CsaResult csa = run_csa(inst, 4 * static_cast<std::int64_t>(inst.d) + 5, csa_rng);
    if (!csa.output.is_bottom() && action_eq(*csa.output.action, truth)) ++csa_hits;

    RewardStream cs_rng(derive_seed(3003, {2, static_cast<std::uint64_t>(rep)}));
    const CombsarResult cs =
        run_minimax_combsar(inst, actions, 600, 0.2, AllocationMode::kLagrange, cs_rng);
    if (action_eq(cs.output, truth)) ++combsar_hits;
    g_schedule.absorb(cs, actions.size(), inst.d);
  }
  std::ostringstream out;
  out << "csa " << csa_hits << "/" << n << ", combsar " << combsar_hits << "/" << n;
  detail = out.str();
  return csa_hits == n && combsar_hits == n;
}

bool criterion_oracle_equivalence(std::string& detail) {
  RewardStream rng(4004);
  int knapsack_fail = 0, transport_fail = 0;
  for (int rep = 0; rep < 200; ++rep) {
    const auto d = static_cast<std::size_t>(rng.uniform_int(1, 6));
    const std::int64_t capacity = rng.uniform_int(0, 30);
    std::vector<std::int64_t> weights(d);
    std::vector<double> values(d);
    for (std::size_t s = 0; s < d; ++s) {
      weights[s] = rng.uniform_int(1, 10);
      values[s] = rng.uniform_real(-2.0, 6.0);
    }
    const double dp = expected_value(values, solve_knapsack(values, weights, capacity));
    const double brute = ts::knapsack_best_value_bruteforce(values, weights, capacity);
    if (std::abs(dp - brute) > 1e-9 * std::max(1.0, std::abs(brute))) ++knapsack_fail;
  }
  for (int rep = 0; rep < 100; ++rep) {
    const BanditInstance inst = ts::random_transport_instance(rng, 4, 0.0);
    const auto& spec = std::get<TransportSpec>(inst.spec);
    std::vector<double> cost(inst.d);
    for (std::size_t e = 0; e < inst.d; ++e) cost[e] = -inst.mu[e];
    const double flow =
        expected_value(cost, solve_transport(cost, spec.supplies, spec.demands));
    const double brute = ts::transport_best_cost_bruteforce(cost, spec.supplies, spec.demands);
    if (std::abs(flow - brute) > 1e-9 * std::max(1.0, std::abs(brute))) ++transport_fail;
  }
  std::ostringstream out;
  out << "knapsack mismatches " << knapsack_fail << "/200, transport mismatches "
      << transport_fail << "/100";
  detail = out.str();
  return knapsack_fail == 0 && transport_fail == 0;
}

bool criterion_coracle(std::string& detail) {
  RewardStream rng(5005);
  int failures = 0, bottoms = 0;
  for (int rep = 0; rep < 200; ++rep) {
    BanditInstance inst;
    const int kind = rep % 3;
    if (kind == 0) {
      inst = ts::random_knapsack_instance(rng, 4, 12, 0.0);
    } else if (kind == 1) {
      inst = ts::random_transport_instance(rng, 3, 0.0);
    } else {
      inst = ts::random_enumerated_instance(rng, 2, 5, 10, 0.0);
    }
    AssignmentSet s;
    const auto pins = rng.uniform_int(0, 2);
    for (std::int64_t p = 0; p < pins; ++p) {
      const auto e = static_cast<std::size_t>(
          rng.uniform_int(0, static_cast<std::int64_t>(inst.d) - 1));
      if (s.has_arm(e)) continue;
      const auto values = possible_pi(inst.spec, e);
      s.assign(e, values[static_cast<std::size_t>(
                   rng.uniform_int(0, static_cast<std::int64_t>(values.size()) - 1))]);
    }
    const auto feasible = ts::enumerate_constrained(inst.spec, s);
    const OracleResult r = coracle(inst.spec, inst.mu, s);
    if (r.is_bottom()) {
      ++bottoms;
      if (!feasible.empty()) ++failures;
      continue;
    }
    if (feasible.empty()) {
      ++failures;
      continue;
    }
    bool pins_ok = true;
    for (const auto& [arm, x] : s.pairs()) {
      pins_ok = pins_ok && std::abs((*r.action)[arm] - x) <= kActionTol;
    }
    double best = -1e300;
    for (const auto& a : feasible) best = std::max(best, expected_value(inst.mu, a));
    const double got = expected_value(inst.mu, *r.action);
    if (!pins_ok || std::abs(got - best) > 1e-9 * std::max(1.0, std::abs(best))) ++failures;
  }
  std::ostringstream out;
  out << "200 queries (" << bottoms << " bottom), " << failures << " contract failures";
  detail = out.str();
  return failures == 0;
}

bool criterion_sandwich(std::string& detail) {
  RewardStream rng(6006);
  int failures = 0, checked = 0;
  while (checked < 100) {
    const BanditInstance inst = ts::random_enumerated_instance(rng, 1, 8, 20, 0.0);
    const auto& actions = std::get<EnumeratedSpec>(inst.spec).actions;
    if (actions.size() < 2) continue;
    ++checked;
    const GapReport report = gap_report(inst.mu, actions);
    const double bound = std::log2(2.0 * static_cast<double>(inst.d)) * report.H2;
    if (!(report.H2 <= report.H * (1.0 + 1e-12)) || !(report.H <= bound * (1.0 + 1e-12))) {
      ++failures;
    }
  }
  detail = "100 instances, " + std::to_string(failures) + " sandwich violations";
  return failures == 0;
}

bool criterion_allocations(std::string& detail) {
  int failures = 0;

  // Closed-form checks.
  {
    const std::vector<ActionVector> pair{{1.0, 0.0, 2.0}, {0.0, 1.0, 0.0}};
    const AllocationVector p = allocation_lagrange(pair, PullLog(3), 10.0);
    const std::vector<double> want{0.25, 0.25, 0.5};
    double sum = 0.0;
    for (std::size_t s = 0; s < 3; ++s) {
      if (std::abs(p.weights[s] - want[s]) > 1e-12) ++failures;
      sum += p.weights[s];
    }
    if (std::abs(sum - 1.0) > 1e-12) ++failures;

    const std::vector<ActionVector> lone{{2.0, 1.0}, {2.0, 3.0}};
    const AllocationVector q = allocation_lagrange(lone, PullLog(2), 1.0);
    if (q.weights[0] != 0.0 || std::abs(q.weights[1] - 1.0) > 1e-12) ++failures;
  }

  // Minimax against dense grids for d <= 3.
  RewardStream rng(7007);
  auto grid_best = [](const std::vector<ActionVector>& active, const PullLog& log, double m,
                      std::size_t d, int steps) {
    double best = std::numeric_limits<double>::infinity();
    if (d == 2) {
      for (int i = 0; i <= steps; ++i) {
        const double a = static_cast<double>(i) / steps;
        best = std::min(best, kappa_max(active, log, m, {a, 1.0 - a}));
      }
    } else {
      for (int i = 0; i <= steps; ++i) {
        for (int j = 0; i + j <= steps; ++j) {
          const double a = static_cast<double>(i) / steps;
          const double b = static_cast<double>(j) / steps;
          best = std::min(best, kappa_max(active, log, m, {a, b, 1.0 - a - b}));
        }
      }
    }
    return best;
  };

  int grid_checks = 0;
  for (int rep = 0; rep < 20; ++rep) {
    const auto d = static_cast<std::size_t>(rng.uniform_int(2, 3));
    const auto k = static_cast<std::size_t>(rng.uniform_int(2, 4));
    std::vector<ActionVector> active;
    int attempts = 0;
    while (active.size() < k && attempts++ < 50) {
      ActionVector a(d);
      for (auto& x : a) x = static_cast<double>(rng.uniform_int(0, 3));
      bool dup = false;
      for (const auto& b : active) dup = dup || action_eq(a, b);
      if (!dup) active.push_back(a);
    }
    if (active.size() < 2) continue;
    bool degenerate = true;
    for (std::size_t s = 0; s < d && degenerate; ++s) {
      for (std::size_t i = 1; i < active.size(); ++i) {
        degenerate = degenerate && active[i][s] == active[0][s];
      }
    }
    if (degenerate) continue;
    PullLog log(d);
    for (std::size_t s = 0; s < d; ++s) {
      const auto c = rng.uniform_int(0, 5);
      for (std::int64_t i = 0; i < c; ++i) log.record(s, 0.0);
    }
    const double m = rng.uniform_real(10.0, 100.0);
    const MinimaxAllocation r = allocation_minimax(active, log, m);
    double sum = 0.0;
    for (double w : r.allocation.weights) sum += w;
    if (std::abs(sum - 1.0) > 1e-12) ++failures;
    const double grid = grid_best(active, log, m, d, d == 2 ? 2000 : 150);
    ++grid_checks;
    if (r.objective > grid * (1.0 + 1e-6)) ++failures;
  }

  std::ostringstream out;
  out << "closed-form + " << grid_checks << " grid comparisons, " << failures << " failures";
  detail = out.str();
  return failures == 0 && grid_checks >= 10;
}

struct CellRate {
  double rate = 0.0;
  std::int64_t successes = 0;
  std::int64_t trials = 0;
};

// Two-proportion z statistic; 0 when pooled variance vanishes.
double two_proportion_z(const CellRate& a, const CellRate& b) {
  const double pooled = static_cast<double>(a.successes + b.successes) /
                        static_cast<double>(a.trials + b.trials);
  const double var = pooled * (1.0 - pooled) *
                     (1.0 / static_cast<double>(a.trials) + 1.0 / static_cast<double>(b.trials));
  if (var <= 0.0) return 0.0;
  return (a.rate - b.rate) / std::sqrt(var);
}

bool criterion_figure1_trend(std::string& detail) {
  SweepConfig config;
  config.family = "knapsack-exp";
  config.dims = {5, 10, 15};
  config.budgets = {2000, 20000};
  config.trials = 50;
  config.master_seed = 8008;
  config.algos = {AlgoConfig{"csa", 0.0, AllocationMode::kLagrange}};
  const SweepResult result = run_sweep(config);

  std::map<std::pair<std::size_t, std::int64_t>, CellRate> cells;
  for (const auto& r : result.records) {
    auto& cell = cells[{r.d, r.budget}];
    cell.successes += r.correct ? 1 : 0;
    cell.trials += 1;
  }
  for (auto& [key, cell] : cells) {
    cell.rate = static_cast<double>(cell.successes) / static_cast<double>(cell.trials);
  }

  // easier cell listed first: success must not drop when d shrinks or T grows
  std::vector<std::pair<CellRate, CellRate>> comparisons;
  for (std::int64_t budget : config.budgets) {
    comparisons.push_back({cells[{5, budget}], cells[{10, budget}]});
    comparisons.push_back({cells[{10, budget}], cells[{15, budget}]});
  }
  for (std::size_t d : config.dims) {
    comparisons.push_back({cells[{d, 20000}], cells[{d, 2000}]});
  }

  int inversions = 0, significant = 0;
  for (const auto& [easy, hard] : comparisons) {
    if (easy.rate < hard.rate) {
      ++inversions;
      if (two_proportion_z(hard, easy) > 1.959963985) ++significant;
    }
  }

  std::ostringstream out;
  out << "rates";
  for (std::int64_t budget : config.budgets) {
    out << " [T=" << budget << ":";
    for (std::size_t d : config.dims) out << " " << cells[{d, budget}].rate;
    out << "]";
  }
  out << ", inversions " << inversions << " (significant " << significant << ")";
  detail = out.str();
  return significant == 0 && inversions <= 1;
}

bool criterion_figure2_comparison(std::string& detail) {
  SweepConfig config;
  config.family = "knapsack-poly";
  config.dims = {10, 20};
  config.budgets = {50000};
  config.trials = 40;
  config.n_actions = 2000;
  config.master_seed = 9009;
  config.algos = {AlgoConfig{"csa", 0.0, AllocationMode::kLagrange},
                  AlgoConfig{"combsar", 0.2, AllocationMode::kLagrange}};
  const SweepResult result = run_sweep(config);
  g_schedule.runs += result.combsar_runs;
  g_schedule.violations += result.schedule_violations;

  std::map<std::pair<std::string, std::size_t>, CellRate> cells;
  for (const auto& r : result.records) {
    const std::string algo = r.algo.substr(0, r.algo.find('('));
    auto& cell = cells[{algo, r.d}];
    cell.successes += r.correct ? 1 : 0;
    cell.trials += 1;
  }
  for (auto& [key, cell] : cells) {
    cell.rate = static_cast<double>(cell.successes) / static_cast<double>(cell.trials);
  }

  bool ok = true;
  std::ostringstream out;
  for (std::size_t d : config.dims) {
    const double csa = cells[{"csa", d}].rate;
    const double combsar = cells[{"combsar", d}].rate;
    out << "d=" << d << ": combsar " << combsar << " vs csa " << csa << "; ";
    if (combsar < csa - 0.10) ok = false;
  }
  detail = out.str();
  return ok;
}

bool criterion_elimination_schedule(std::string& detail) {
  std::ostringstream out;
  out << g_schedule.runs << " combsar runs, " << g_schedule.violations
      << " schedule violations";
  detail = out.str();
  return g_schedule.runs > 0 && g_schedule.violations == 0;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<bool(std::string&)> run;
  };
  const std::vector<Criterion> criteria{
      {1, "CSA budget safety", criterion_csa_budget},
      {2, "Minimax-CombSAR budget safety", criterion_combsar_budget},
      {3, "zero-noise exactness (both algorithms)", criterion_zero_noise},
      {4, "offline oracle equivalence vs enumeration", criterion_oracle_equivalence},
      {5, "constrained oracle correctness", criterion_coracle},
      {6, "complexity sandwich H2 <= H <= log2(2d) H2", criterion_sandwich},
      {7, "allocation correctness (closed form + minimax grid)", criterion_allocations},
      {8, "success trend over (d, T) grid", criterion_figure1_trend},
      {9, "combsar vs csa on the polynomial family", criterion_figure2_comparison},
      {10, "elimination schedule in-run assertions", criterion_elimination_schedule},
  };

  int failed = 0;
  for (const auto& criterion : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
      ok = criterion.run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("[%s] %2d. %s - %s (%.1fs)\n", ok ? "PASS" : "FAIL", criterion.id,
                criterion.name, detail.c_str(), secs);
    std::fflush(stdout);
    if (!ok) ++failed;
  }
  return failed;
}
