#include "rcpe/combsar.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "rcpe/parallel.hpp"

namespace rcpe {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::size_t ceil_log2(std::size_t d) {
  std::size_t r = 0;
  while ((std::size_t{1} << r) < d) ++r;
  return r;
}

std::size_t ceil_div_pow2(std::size_t d, std::size_t r) {
  const std::size_t q = std::size_t{1} << r;
  return (d + q - 1) / q;
}

// Squared l2 distance; the lambda order statistic at the uniform allocation.
double pair_sq_dist(const ActionVector& a, const ActionVector& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    s += diff * diff;
  }
  return s;
}

// Euclidean projection onto the simplex restricted to `support` coordinates.
void project_simplex(std::vector<double>& p, const std::vector<std::size_t>& support) {
  std::vector<double> v;
  v.reserve(support.size());
  for (std::size_t s : support) v.push_back(p[s]);
  std::vector<double> u = v;
  std::sort(u.begin(), u.end(), std::greater<>());
  double cum = 0.0, theta = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    cum += u[i];
    const double t = (cum - 1.0) / static_cast<double>(i + 1);
    if (u[i] - t > 0.0) theta = t;
  }
  std::fill(p.begin(), p.end(), 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < support.size(); ++i) {
    p[support[i]] = std::max(0.0, v[i] - theta);
    total += p[support[i]];
  }
  if (total > 0.0) {
    for (std::size_t s : support) p[s] /= total;
  }
}

}  // namespace

double phase_budget(std::int64_t t_prime, std::size_t d, std::size_t r) {
  const std::size_t rounds = ceil_log2(d);
  if (r < 1 || r > rounds) throw InvalidSpecError("phase_budget: round out of range");
  if (t_prime <= static_cast<std::int64_t>(d * rounds)) {
    throw InsufficientBudgetError("phase_budget: residual budget too small");
  }
  const double b = static_cast<double>((std::size_t{1} << rounds) - 1);
  const double numer = static_cast<double>(t_prime) - static_cast<double>(d * rounds);
  return numer / (b / static_cast<double>(std::size_t{1} << (r - 1)));
}

double pair_lambda(const ActionVector& a, const ActionVector& b,
                   const std::vector<double>& p, double m) {
  double out = 0.0;
  for (std::size_t s = 0; s < a.size(); ++s) {
    const double diff = a[s] - b[s];
    if (diff == 0.0) continue;
    const double denom = p[s] * m;
    if (denom <= 0.0) return kInf;
    out += diff * diff / denom;
  }
  return out;
}

std::pair<std::size_t, std::size_t> lambda_argmax_pair_reference(
    const std::vector<ActionVector>& active) {
  if (active.size() < 2) throw InvalidSpecError("lambda_argmax_pair: need >= 2 actions");
  std::pair<std::size_t, std::size_t> best{0, 1};
  double best_sq = pair_sq_dist(active[0], active[1]);
  for (std::size_t i = 0; i < active.size(); ++i) {
    for (std::size_t j = i + 1; j < active.size(); ++j) {
      const double sq = pair_sq_dist(active[i], active[j]);
      if (sq > best_sq) {
        best_sq = sq;
        best = {i, j};
      }
    }
  }
  return best;
}

std::pair<std::size_t, std::size_t> lambda_argmax_pair(const std::vector<ActionVector>& active) {
  if (active.size() < 2) throw InvalidSpecError("lambda_argmax_pair: need >= 2 actions");
  const std::size_t k = active.size();
  std::size_t best_i = k, best_j = k;
  double best_sq = -1.0;
#pragma omp parallel num_threads(max_threads())
  {
    std::size_t loc_i = k, loc_j = k;
    double loc_sq = -1.0;
#pragma omp for schedule(dynamic, 16) nowait
    for (std::ptrdiff_t ip = 0; ip < static_cast<std::ptrdiff_t>(k); ++ip) {
      const auto i = static_cast<std::size_t>(ip);
      for (std::size_t j = i + 1; j < k; ++j) {
        const double sq = pair_sq_dist(active[i], active[j]);
        if (sq > loc_sq || (sq == loc_sq && (i < loc_i || (i == loc_i && j < loc_j)))) {
          loc_sq = sq;
          loc_i = i;
          loc_j = j;
        }
      }
    }
#pragma omp critical
    {
      if (loc_sq > best_sq ||
          (loc_sq == best_sq && (loc_i < best_i || (loc_i == best_i && loc_j < best_j)))) {
        best_sq = loc_sq;
        best_i = loc_i;
        best_j = loc_j;
      }
    }
  }
  return {best_i, best_j};
}

AllocationVector allocation_lagrange(const std::vector<ActionVector>& active,
                                     const PullLog& /*log*/, double /*m*/) {
  const auto [i, j] = lambda_argmax_pair(active);
  const std::size_t d = active[i].size();
  std::vector<double> w(d, 0.0);
  double total = 0.0;
  for (std::size_t s = 0; s < d; ++s) {
    w[s] = std::abs(active[i][s] - active[j][s]);
    total += w[s];
  }
  if (total <= 0.0) throw DegenerateInstanceError("allocation_lagrange: all pairs identical");
  for (double& x : w) x /= total;
  return {std::move(w)};
}

double kappa_max(const std::vector<ActionVector>& active, const PullLog& log, double m,
                 const std::vector<double>& p) {
  double worst = 0.0;
  for (std::size_t a = 0; a < active.size(); ++a) {
    for (std::size_t b = a + 1; b < active.size(); ++b) {
      double kappa = 0.0;
      for (std::size_t s = 0; s < p.size(); ++s) {
        const double diff = active[a][s] - active[b][s];
        if (diff == 0.0) continue;
        const double denom = static_cast<double>(log.counts[s]) + p[s] * m;
        if (denom <= 0.0) return kInf;
        kappa += diff * diff / denom;
      }
      worst = std::max(worst, kappa);
    }
  }
  return worst;
}

MinimaxAllocation allocation_minimax(const std::vector<ActionVector>& active,
                                     const PullLog& log, double m) {
  if (active.size() < 2) throw InvalidSpecError("allocation_minimax: need >= 2 actions");
  const std::size_t d = active[0].size();

  // Coordinates where some pair differs; mass anywhere else is wasted.
  std::vector<std::size_t> support;
  for (std::size_t s = 0; s < d; ++s) {
    for (std::size_t i = 1; i < active.size(); ++i) {
      if (active[i][s] != active[0][s]) {
        support.push_back(s);
        break;
      }
    }
  }
  if (support.empty()) {
    throw DegenerateInstanceError("allocation_minimax: all pairs identical");
  }

  std::vector<double> p(d, 0.0);
  for (std::size_t s : support) p[s] = 1.0 / static_cast<double>(support.size());

  auto objective = [&](const std::vector<double>& q) { return kappa_max(active, log, m, q); };

  std::vector<double> best_p = p;
  double best_f = objective(p);

  constexpr int kIterations = 500;
  double f_at_tail_start = best_f;
  for (int it = 1; it <= kIterations; ++it) {
    if (it == kIterations - 100) f_at_tail_start = best_f;
    // Subgradient of the worst pair's kappa at p.
    std::size_t wa = 0, wb = 1;
    double worst = -kInf;
    for (std::size_t a = 0; a < active.size(); ++a) {
      for (std::size_t b = a + 1; b < active.size(); ++b) {
        double kappa = 0.0;
        for (std::size_t s : support) {
          const double diff = active[a][s] - active[b][s];
          if (diff == 0.0) continue;
          const double denom =
              static_cast<double>(log.counts[s]) + std::max(p[s], 1e-12) * m;
          kappa += diff * diff / denom;
        }
        if (kappa > worst) {
          worst = kappa;
          wa = a;
          wb = b;
        }
      }
    }
    std::vector<double> grad(d, 0.0);
    double norm_sq = 0.0;
    for (std::size_t s : support) {
      const double diff = active[wa][s] - active[wb][s];
      if (diff == 0.0) continue;
      const double denom = static_cast<double>(log.counts[s]) + std::max(p[s], 1e-12) * m;
      grad[s] = -diff * diff * m / (denom * denom);
      norm_sq += grad[s] * grad[s];
    }
    if (norm_sq <= 0.0) break;
    const double step = 1.0 / std::sqrt(static_cast<double>(it));
    const double inv_norm = 1.0 / std::sqrt(norm_sq);
    for (std::size_t s : support) p[s] -= step * inv_norm * grad[s];
    project_simplex(p, support);
    const double f = objective(p);
    if (f < best_f) {
      best_f = f;
      best_p = p;
    }
  }

  MinimaxAllocation out;
  // Still improving through the tail and too many pairs to polish: report
  // that the iteration cap bound the solve.
  const std::size_t pair_count = active.size() * (active.size() - 1) / 2;
  const bool tail_active =
      std::isfinite(best_f) && best_f > 0.0 && (f_at_tail_start - best_f) / best_f > 1e-9;
  out.hit_iteration_cap = pair_count > 4096 && tail_active;

  // Deterministic polish stage. kappa_max is a max of convex pieces, so the
  // subgradient iterate can stall on a kink; refine it with derivative-free
  // searches that only ever keep improvements.
  if (pair_count <= 4096) {
    // Pairwise mass transfers (1-D convex searches), any support size.
    p = best_p;
    for (int pass = 0; pass < 4; ++pass) {
      for (std::size_t a : support) {
        for (std::size_t b : support) {
          if (a == b) continue;
          double lo = -p[b], hi = p[a];
          auto shifted = [&](double t) {
            std::vector<double> q = p;
            q[a] -= t;
            q[b] += t;
            return objective(q);
          };
          for (int iter = 0; iter < 80 && hi - lo > 1e-14; ++iter) {
            const double m1 = lo + (hi - lo) / 3.0;
            const double m2 = hi - (hi - lo) / 3.0;
            if (shifted(m1) <= shifted(m2)) {
              hi = m2;
            } else {
              lo = m1;
            }
          }
          const double t = (lo + hi) / 2.0;
          p[a] -= t;
          p[b] += t;
          const double f = objective(p);
          if (f < best_f) {
            best_f = f;
            best_p = p;
          } else {
            p = best_p;
          }
        }
      }
    }

    // Supports of up to three coordinates admit an effectively exact solve by
    // nested ternary search: partial minimization of a convex function is
    // convex, so each 1-D slice is unimodal.
    const std::size_t k = support.size();
    if (k == 2 || k == 3) {
      std::vector<double> q(d, 0.0);
      const auto eval_point = [&](double a, double b) {
        q[support[0]] = a;
        if (k == 2) {
          q[support[1]] = std::max(0.0, 1.0 - a);
        } else {
          q[support[1]] = b;
          q[support[2]] = std::max(0.0, 1.0 - a - b);
        }
        return objective(q);
      };
      // Minimizes over the second coordinate; writes the minimizer to b_out.
      const auto inner_min = [&](double a, double& b_out) {
        if (k == 2) {
          b_out = 0.0;
          return eval_point(a, 0.0);
        }
        double lo = 0.0, hi = 1.0 - a;
        for (int iter = 0; iter < 100 && hi - lo > 1e-15; ++iter) {
          const double m1 = lo + (hi - lo) / 3.0;
          const double m2 = hi - (hi - lo) / 3.0;
          if (eval_point(a, m1) <= eval_point(a, m2)) {
            hi = m2;
          } else {
            lo = m1;
          }
        }
        b_out = (lo + hi) / 2.0;
        return eval_point(a, b_out);
      };
      double lo = 0.0, hi = 1.0;
      double b_tmp = 0.0;
      for (int iter = 0; iter < 100 && hi - lo > 1e-15; ++iter) {
        const double m1 = lo + (hi - lo) / 3.0;
        const double m2 = hi - (hi - lo) / 3.0;
        if (inner_min(m1, b_tmp) <= inner_min(m2, b_tmp)) {
          hi = m2;
        } else {
          lo = m1;
        }
      }
      const double a_best = (lo + hi) / 2.0;
      const double f = inner_min(a_best, b_tmp);
      eval_point(a_best, b_tmp);  // rebuild q at the minimizer
      if (f < best_f) {
        best_f = f;
        best_p = q;
      }
    }
  }

  out.allocation.weights = best_p;
  out.objective = best_f;
  return out;
}

std::vector<std::size_t> eliminate(const std::vector<double>& estimates,
                                   const std::vector<std::size_t>& original_index,
                                   std::size_t d, std::size_t r) {
  const std::size_t keep = ceil_div_pow2(d, r);
  if (estimates.size() != original_index.size()) {
    throw InvalidSpecError("eliminate: size mismatch");
  }
  if (estimates.size() < keep) throw InvalidSpecError("eliminate: fewer actions than quota");
  std::vector<std::size_t> order(estimates.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (estimates[a] != estimates[b]) return estimates[a] > estimates[b];
    return original_index[a] < original_index[b];
  });
  order.resize(keep);
  std::sort(order.begin(), order.end());
  return order;
}

CombsarResult run_minimax_combsar(const BanditInstance& instance,
                                  const std::vector<ActionVector>& actions,
                                  std::int64_t budget, double beta, AllocationMode mode,
                                  RewardStream& rng) {
  validate(instance);
  if (beta < 0.0 || beta > 1.0) throw InvalidSpecError("combsar: beta must be in [0, 1]");
  if (actions.empty()) throw InvalidSpecError("combsar: empty action class");
  for (const auto& a : actions) {
    if (a.size() != instance.d) throw InvalidSpecError("combsar: action length != d");
  }

  CombsarResult result;
  if (actions.size() == 1) {
    result.output = actions.front();
    return result;
  }

  const std::size_t d = instance.d;
  const std::size_t rounds = ceil_log2(d);
  const auto init_pulls = static_cast<std::int64_t>(
      std::floor(static_cast<double>(budget) / static_cast<double>(d) * beta));
  const std::int64_t t_prime = budget - init_pulls * static_cast<std::int64_t>(d);
  if (rounds > 0 && t_prime <= static_cast<std::int64_t>(d * rounds)) {
    throw InsufficientBudgetError("combsar: budget too small for the halving schedule");
  }

  PullLog log(d);
  std::int64_t remaining = budget;
  auto pull = [&](std::size_t arm, std::int64_t times) {
    for (std::int64_t k = 0; k < times; ++k) {
      if (remaining == 0) {
        result.budget_clamped = true;
        return;
      }
      log.record(arm, sample_reward(instance, arm, rng));
      --remaining;
    }
  };

  for (std::size_t s = 0; s < d; ++s) pull(s, init_pulls);

  std::vector<std::size_t> active(actions.size());
  std::iota(active.begin(), active.end(), 0);

  // Estimated values with the undefined-mean convention: actions putting
  // weight on a never-pulled arm score -inf, never a silent zero.
  auto estimate_all = [&]() {
    const auto means = empirical_means(log);
    std::vector<double> est(active.size(), 0.0);
    for (std::size_t k = 0; k < active.size(); ++k) {
      const ActionVector& a = actions[active[k]];
      double v = 0.0;
      bool defined = true;
      for (std::size_t s = 0; s < d; ++s) {
        if (a[s] == 0.0) continue;
        if (!means[s].has_value()) {
          defined = false;
          break;
        }
        v += *means[s] * a[s];
      }
      est[k] = defined ? v : -kInf;
    }
    return est;
  };

  for (std::size_t r = 1; r <= rounds; ++r) {
    const double m = phase_budget(t_prime, d, r);

    if (active.size() >= 2) {
      std::vector<ActionVector> active_actions;
      active_actions.reserve(active.size());
      for (std::size_t idx : active) active_actions.push_back(actions[idx]);

      const AllocationVector p = (mode == AllocationMode::kLagrange)
                                     ? allocation_lagrange(active_actions, log, m)
                                     : allocation_minimax(active_actions, log, m).allocation;
      for (std::size_t s = 0; s < d; ++s) {
        if (p.weights[s] <= 0.0) continue;
        pull(s, static_cast<std::int64_t>(std::ceil(p.weights[s] * m)));
      }
    }

    const std::size_t quota = ceil_div_pow2(d, r);
    if (active.size() > quota) {
      const std::vector<double> est = estimate_all();
      const std::vector<std::size_t> keep = eliminate(est, active, d, r);
      std::vector<std::size_t> next;
      next.reserve(keep.size());
      for (std::size_t pos : keep) next.push_back(active[pos]);
      active = std::move(next);
    }
    result.active_counts.push_back(active.size());
    if (active.size() != quota) result.schedule_exact = false;
  }

  if (active.size() == 1) {
    result.output = actions[active.front()];
  } else {
    // Only reachable when d == 1 (zero rounds) with several actions: the
    // halving schedule cannot eliminate, so take the best estimate.
    const std::vector<double> est = estimate_all();
    std::size_t best = 0;
    for (std::size_t k = 1; k < active.size(); ++k) {
      if (est[k] > est[best]) best = k;
    }
    result.output = actions[active[best]];
    result.schedule_exact = false;
  }
  result.pulls_used = log.total;
  result.log = std::move(log);
  return result;
}

}  // namespace rcpe
