#include "rcpe/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rcpe/parallel.hpp"

namespace rcpe {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

std::size_t argmax_index(const std::vector<double>& mu,
                         const std::vector<ActionVector>& actions) {
  if (actions.empty()) throw InvalidSpecError("metrics: empty action list");
  std::size_t best = 0;
  double best_value = -kInf;
  for (std::size_t i = 0; i < actions.size(); ++i) {
    double v = 0.0;
    for (std::size_t s = 0; s < mu.size(); ++s) v += mu[s] * actions[i][s];
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }
  return best;
}

std::size_t unique_best_or_throw(const std::vector<double>& mu,
                                 const std::vector<ActionVector>& actions) {
  const std::size_t best = argmax_index(mu, actions);
  const double best_value = expected_value(mu, actions[best]);
  for (std::size_t i = 0; i < actions.size(); ++i) {
    if (i != best && expected_value(mu, actions[i]) == best_value) {
      throw DegenerateInstanceError("gap_report: best action is not unique");
    }
  }
  return best;
}

double h_from_gaps(const std::vector<double>& gaps) {
  double h = 0.0;
  for (double g : gaps) {
    if (std::isfinite(g)) h += 1.0 / (g * g);
  }
  return h;
}

double h2_from_gaps(const std::vector<double>& gaps) {
  std::vector<double> finite;
  for (double g : gaps) {
    if (std::isfinite(g)) finite.push_back(g);
  }
  std::sort(finite.begin(), finite.end());
  double h2 = 0.0;
  for (std::size_t s = 0; s < finite.size(); ++s) {
    h2 = std::max(h2, static_cast<double>(s + 1) / (finite[s] * finite[s]));
  }
  return h2;
}

}  // namespace

ActionVector best_action_bruteforce(const std::vector<double>& mu,
                                    const std::vector<ActionVector>& actions) {
  return actions[argmax_index(mu, actions)];
}

std::optional<double> g_gap(const std::vector<double>& mu,
                            const std::vector<ActionVector>& actions, std::size_t s) {
  const std::size_t best = unique_best_or_throw(mu, actions);
  const ActionVector& star = actions[best];
  const double star_value = expected_value(mu, star);
  double gap = kInf;
  for (std::size_t i = 0; i < actions.size(); ++i) {
    if (i == best) continue;
    const double denom = std::abs(star[s] - actions[i][s]);
    if (denom <= kActionTol) continue;
    gap = std::min(gap, (star_value - expected_value(mu, actions[i])) / denom);
  }
  if (!std::isfinite(gap)) return std::nullopt;
  return gap;
}

GapReport gap_report(const std::vector<double>& mu, const std::vector<ActionVector>& actions) {
  const std::size_t best = unique_best_or_throw(mu, actions);
  const std::size_t d = mu.size();
  const std::size_t num_actions = actions.size();
  const ActionVector& star = actions[best];
  const double star_value = expected_value(mu, star);

  std::vector<double> values(num_actions);
  for (std::size_t i = 0; i < num_actions; ++i) values[i] = expected_value(mu, actions[i]);

  GapReport report;
  report.best = star;
  report.gaps.assign(d, kInf);

#pragma omp parallel for schedule(static) num_threads(max_threads())
  for (std::ptrdiff_t sp = 0; sp < static_cast<std::ptrdiff_t>(d); ++sp) {
    const auto s = static_cast<std::size_t>(sp);
    double gap = kInf;
    for (std::size_t i = 0; i < num_actions; ++i) {
      if (i == best) continue;
      const double denom = std::abs(star[s] - actions[i][s]);
      if (denom <= kActionTol) continue;
      gap = std::min(gap, (star_value - values[i]) / denom);
    }
    report.gaps[s] = gap;
  }
  report.H = h_from_gaps(report.gaps);
  report.H2 = h2_from_gaps(report.gaps);

  // L only depends on the sets of coordinate values, not on which action
  // carries them: max |v1 - v2| / |v1 - v3| over values at one coordinate.
  double l_max = 0.0;
#pragma omp parallel for schedule(static) reduction(max : l_max) num_threads(max_threads())
  for (std::ptrdiff_t ep = 0; ep < static_cast<std::ptrdiff_t>(d); ++ep) {
    const auto e = static_cast<std::size_t>(ep);
    std::vector<double> vals(num_actions);
    for (std::size_t i = 0; i < num_actions; ++i) vals[i] = actions[i][e];
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end(),
                           [](double a, double b) { return std::abs(a - b) <= kActionTol; }),
               vals.end());
    if (vals.size() < 2) continue;
    for (std::size_t a = 0; a < vals.size(); ++a) {
      const double spread = std::max(vals[a] - vals.front(), vals.back() - vals[a]);
      double nearest = kInf;
      if (a > 0) nearest = std::min(nearest, vals[a] - vals[a - 1]);
      if (a + 1 < vals.size()) nearest = std::min(nearest, vals[a + 1] - vals[a]);
      l_max = std::max(l_max, spread / nearest);
    }
  }
  report.L = l_max;

  // U_A over unordered action pairs: l1 distance over the smallest nonzero
  // coordinate difference.
  double ua_max = 0.0;
#pragma omp parallel for schedule(dynamic) reduction(max : ua_max) num_threads(max_threads())
  for (std::ptrdiff_t ip = 0; ip < static_cast<std::ptrdiff_t>(num_actions); ++ip) {
    const auto i = static_cast<std::size_t>(ip);
    for (std::size_t j = i + 1; j < num_actions; ++j) {
      double l1 = 0.0;
      double min_diff = kInf;
      for (std::size_t s = 0; s < d; ++s) {
        const double diff = std::abs(actions[i][s] - actions[j][s]);
        l1 += diff;
        if (diff > kActionTol) min_diff = std::min(min_diff, diff);
      }
      if (std::isfinite(min_diff)) ua_max = std::max(ua_max, l1 / min_diff);
    }
  }
  report.U_A = ua_max;

  double v_max = 0.0;
  double v_app = 0.0;
#pragma omp parallel for schedule(static) reduction(max : v_max, v_app) num_threads(max_threads())
  for (std::ptrdiff_t ip = 0; ip < static_cast<std::ptrdiff_t>(num_actions); ++ip) {
    const auto i = static_cast<std::size_t>(ip);
    if (i == best) continue;
    double l1 = 0.0;
    double linf = 0.0;
    double min_diff = kInf;
    for (std::size_t s = 0; s < d; ++s) {
      const double diff = std::abs(star[s] - actions[i][s]);
      l1 += diff;
      linf = std::max(linf, diff);
      if (diff > kActionTol) min_diff = std::min(min_diff, diff);
    }
    if (linf > 0.0) {
      const double r = l1 / linf;
      v_max = std::max(v_max, r * r);
    }
    if (std::isfinite(min_diff)) v_app = std::max(v_app, l1 / min_diff);
  }
  report.V = v_max;
  report.V_appendix = v_app;
  return report;
}

GapReport gap_report_reference(const std::vector<double>& mu,
                               const std::vector<ActionVector>& actions) {
  const std::size_t best = unique_best_or_throw(mu, actions);
  const std::size_t d = mu.size();
  const std::size_t num_actions = actions.size();
  const ActionVector& star = actions[best];

  GapReport report;
  report.best = star;
  report.gaps.assign(d, kInf);
  for (std::size_t s = 0; s < d; ++s) {
    if (auto g = g_gap(mu, actions, s)) report.gaps[s] = *g;
  }
  report.H = h_from_gaps(report.gaps);
  report.H2 = h2_from_gaps(report.gaps);

  double l_max = 0.0;
  for (std::size_t e = 0; e < d; ++e) {
    for (const auto& p1 : actions) {
      for (const auto& p2 : actions) {
        for (const auto& p3 : actions) {
          const double denom = std::abs(p1[e] - p3[e]);
          if (denom <= kActionTol) continue;
          l_max = std::max(l_max, std::abs(p1[e] - p2[e]) / denom);
        }
      }
    }
  }
  report.L = l_max;

  double ua_max = 0.0;
  for (std::size_t i = 0; i < num_actions; ++i) {
    for (std::size_t j = 0; j < num_actions; ++j) {
      if (i == j) continue;
      double l1 = 0.0;
      for (std::size_t s = 0; s < d; ++s) l1 += std::abs(actions[i][s] - actions[j][s]);
      for (std::size_t e = 0; e < d; ++e) {
        const double denom = std::abs(actions[i][e] - actions[j][e]);
        if (denom <= kActionTol) continue;
        ua_max = std::max(ua_max, l1 / denom);
      }
    }
  }
  report.U_A = ua_max;

  double v_max = 0.0;
  double v_app = 0.0;
  for (std::size_t i = 0; i < num_actions; ++i) {
    if (i == best) continue;
    double l1 = 0.0;
    std::size_t s_i = 0;
    double linf = -1.0;
    for (std::size_t s = 0; s < d; ++s) {
      const double diff = std::abs(star[s] - actions[i][s]);
      l1 += diff;
      if (diff > linf) {  // ties keep the lowest s
        linf = diff;
        s_i = s;
      }
    }
    const double anchor = std::abs(star[s_i] - actions[i][s_i]);
    if (anchor > 0.0) {
      const double r = l1 / anchor;
      v_max = std::max(v_max, r * r);
    }
    for (std::size_t s = 0; s < d; ++s) {
      const double denom = std::abs(star[s] - actions[i][s]);
      if (denom <= kActionTol) continue;
      v_app = std::max(v_app, l1 / denom);
    }
  }
  report.V = v_max;
  report.V_appendix = v_app;
  return report;
}

namespace {

bool enumerate_knapsack(const KnapsackSpec& spec, std::size_t item, std::int64_t residual,
                        ActionVector& current, std::vector<ActionVector>& out,
                        std::size_t cap) {
  if (item == spec.weights.size()) {
    if (out.size() >= cap) return false;
    out.push_back(current);
    return true;
  }
  const std::int64_t max_count = residual / spec.weights[item];
  for (std::int64_t c = 0; c <= max_count; ++c) {
    current[item] = static_cast<double>(c);
    if (!enumerate_knapsack(spec, item + 1, residual - c * spec.weights[item], current, out,
                            cap)) {
      return false;
    }
  }
  current[item] = 0.0;
  return true;
}

bool enumerate_transport(const TransportSpec& spec, std::size_t cell,
                         std::vector<std::int64_t>& rs, std::vector<std::int64_t>& rd,
                         ActionVector& current, std::vector<ActionVector>& out,
                         std::size_t cap) {
  const std::size_t n = spec.demands.size();
  if (cell == current.size()) {
    if (out.size() >= cap) return false;
    out.push_back(current);
    return true;
  }
  const std::size_t i = cell / n, j = cell % n;
  const bool last_in_row = (j == n - 1);
  const std::int64_t hi = std::min(rs[i], rd[j]);
  // The last cell of a row must absorb the remaining row supply exactly.
  const std::int64_t lo = last_in_row ? rs[i] : 0;
  if (lo > hi) return true;
  for (std::int64_t x = lo; x <= hi; ++x) {
    current[cell] = static_cast<double>(x);
    rs[i] -= x;
    rd[j] -= x;
    const bool ok = enumerate_transport(spec, cell + 1, rs, rd, current, out, cap);
    rs[i] += x;
    rd[j] += x;
    if (!ok) return false;
  }
  current[cell] = 0.0;
  return true;
}

}  // namespace

std::optional<std::vector<ActionVector>> enumerate_action_class(const ActionClassSpec& spec,
                                                                std::size_t cap) {
  if (const auto* e = std::get_if<EnumeratedSpec>(&spec)) {
    if (e->actions.size() > cap) return std::nullopt;
    return e->actions;
  }
  std::vector<ActionVector> out;
  ActionVector current(spec_dimension(spec), 0.0);
  if (const auto* k = std::get_if<KnapsackSpec>(&spec)) {
    if (!enumerate_knapsack(*k, 0, k->capacity, current, out, cap)) return std::nullopt;
    return out;
  }
  const auto& t = std::get<TransportSpec>(spec);
  auto rs = t.supplies;
  auto rd = t.demands;
  if (!enumerate_transport(t, 0, rs, rd, current, out, cap)) return std::nullopt;
  return out;
}

}  // namespace rcpe
