#include "rcpe/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace rcpe {

void AssignmentSet::assign(std::size_t arm, double value) {
  auto it = std::lower_bound(pairs_.begin(), pairs_.end(), arm,
                             [](const auto& p, std::size_t a) { return p.first < a; });
  if (it != pairs_.end() && it->first == arm) {
    throw InvalidSpecError("AssignmentSet: arm already assigned");
  }
  pairs_.insert(it, {arm, value});
}

bool AssignmentSet::has_arm(std::size_t arm) const {
  return value_for(arm).has_value();
}

std::optional<double> AssignmentSet::value_for(std::size_t arm) const {
  auto it = std::lower_bound(pairs_.begin(), pairs_.end(), arm,
                             [](const auto& p, std::size_t a) { return p.first < a; });
  if (it != pairs_.end() && it->first == arm) return it->second;
  return std::nullopt;
}

ActionVector solve_knapsack(const std::vector<double>& values,
                            const std::vector<std::int64_t>& weights,
                            std::int64_t capacity) {
  const std::size_t d = values.size();
  if (weights.size() != d) throw InvalidSpecError("solve_knapsack: size mismatch");
  for (auto w : weights) {
    if (w < 1) throw InvalidSpecError("solve_knapsack: nonpositive weight");
  }
  if (capacity < 0) throw InvalidSpecError("solve_knapsack: negative capacity");

  const std::size_t w_cap = static_cast<std::size_t>(capacity);
  std::vector<double> best(w_cap + 1, 0.0);
  // choice[w]: item taken at capacity w, or -1 for "inherit best[w-1]".
  std::vector<std::int32_t> choice(w_cap + 1, -1);
  for (std::size_t w = 1; w <= w_cap; ++w) {
    best[w] = best[w - 1];
    for (std::size_t s = 0; s < d; ++s) {
      if (values[s] <= 0.0) continue;  // never worth taking
      const auto ws = static_cast<std::size_t>(weights[s]);
      if (ws > w) continue;
      const double cand = best[w - ws] + values[s];
      if (cand > best[w]) {
        best[w] = cand;
        choice[w] = static_cast<std::int32_t>(s);
      }
    }
  }

  ActionVector counts(d, 0.0);
  std::size_t w = w_cap;
  while (w > 0) {
    if (choice[w] < 0) {
      --w;
    } else {
      const auto s = static_cast<std::size_t>(choice[w]);
      counts[s] += 1.0;
      w -= static_cast<std::size_t>(weights[s]);
    }
  }
  return counts;
}

double forbidden_cost() { return std::numeric_limits<double>::infinity(); }

namespace {

// Successive shortest augmenting paths with potentials on the bipartite
// transportation network. Node layout: 0 = source, 1..m suppliers,
// m+1..m+n consumers, m+n+1 = sink.
struct FlowNetwork {
  struct Arc {
    std::size_t to;
    std::int64_t cap;
    double cost;
    std::size_t rev;  // index of the reverse arc in adj[to]
  };
  std::vector<std::vector<Arc>> adj;

  explicit FlowNetwork(std::size_t nodes) : adj(nodes) {}

  void add_arc(std::size_t from, std::size_t to, std::int64_t cap, double cost) {
    adj[from].push_back({to, cap, cost, adj[to].size()});
    adj[to].push_back({from, 0, -cost, adj[from].size() - 1});
  }
};

}  // namespace

ActionVector solve_transport(const std::vector<double>& cost,
                             const std::vector<std::int64_t>& supplies,
                             const std::vector<std::int64_t>& demands) {
  const std::size_t m = supplies.size();
  const std::size_t n = demands.size();
  if (cost.size() != m * n) throw InvalidSpecError("solve_transport: cost size mismatch");
  std::int64_t total_supply = 0, total_demand = 0;
  for (auto s : supplies) {
    if (s < 0) throw InvalidSpecError("solve_transport: negative supply");
    total_supply += s;
  }
  for (auto d : demands) {
    if (d < 0) throw InvalidSpecError("solve_transport: negative demand");
    total_demand += d;
  }
  if (total_supply != total_demand) {
    throw InvalidSpecError("solve_transport: unbalanced marginals");
  }

  // Shift costs so every usable edge is nonnegative. Every unit of flow
  // crosses exactly one (i, j) edge, so the shift moves all plan costs by the
  // same constant and leaves the argmin unchanged.
  double min_cost = 0.0;
  bool any_edge = false;
  for (double c : cost) {
    if (std::isinf(c)) continue;
    min_cost = any_edge ? std::min(min_cost, c) : c;
    any_edge = true;
  }
  const double shift = (any_edge && min_cost < 0.0) ? -min_cost : 0.0;

  const std::size_t src = 0, snk = m + n + 1, nodes = m + n + 2;
  FlowNetwork net(nodes);
  for (std::size_t i = 0; i < m; ++i) net.add_arc(src, 1 + i, supplies[i], 0.0);
  for (std::size_t j = 0; j < n; ++j) net.add_arc(m + 1 + j, snk, demands[j], 0.0);
  // Edge arc for (i, j) is adj[1+i][1+j] by construction order; remember it.
  std::vector<std::pair<std::size_t, std::size_t>> edge_arc(m * n, {0, 0});
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double c = cost[i * n + j];
      if (std::isinf(c)) continue;
      edge_arc[i * n + j] = {1 + i, net.adj[1 + i].size()};
      net.add_arc(1 + i, m + 1 + j, std::min(supplies[i], demands[j]), c + shift);
    }
  }

  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> potential(nodes, 0.0);
  std::int64_t pushed = 0;
  while (pushed < total_supply) {
    // Dijkstra over reduced costs; graphs are tiny, so the O(V^2) scan is fine.
    std::vector<double> dist(nodes, inf);
    std::vector<char> done(nodes, 0);
    std::vector<std::pair<std::size_t, std::size_t>> parent(nodes, {nodes, 0});
    dist[src] = 0.0;
    for (;;) {
      std::size_t u = nodes;
      for (std::size_t v = 0; v < nodes; ++v) {
        if (!done[v] && dist[v] < inf && (u == nodes || dist[v] < dist[u])) u = v;
      }
      if (u == nodes) break;
      done[u] = 1;
      for (std::size_t k = 0; k < net.adj[u].size(); ++k) {
        const auto& a = net.adj[u][k];
        // Finalized labels stay fixed; relaxing them on float-dust negative
        // reduced costs would corrupt the parent chain.
        if (a.cap <= 0 || done[a.to]) continue;
        const double nd = dist[u] + a.cost + potential[u] - potential[a.to];
        if (nd < dist[a.to]) {
          dist[a.to] = nd;
          parent[a.to] = {u, k};
        }
      }
    }
    if (dist[snk] == inf) {
      throw InfeasibleError("solve_transport: forbidden edges block feasibility");
    }
    for (std::size_t v = 0; v < nodes; ++v) {
      if (dist[v] < inf) potential[v] += dist[v];
    }
    std::int64_t aug = total_supply - pushed;
    for (std::size_t v = snk; v != src;) {
      const auto [u, k] = parent[v];
      aug = std::min(aug, net.adj[u][k].cap);
      v = u;
    }
    for (std::size_t v = snk; v != src;) {
      const auto [u, k] = parent[v];
      auto& a = net.adj[u][k];
      a.cap -= aug;
      net.adj[a.to][a.rev].cap += aug;
      v = u;
    }
    pushed += aug;
  }

  ActionVector plan(m * n, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (std::isinf(cost[i * n + j])) continue;
      const auto [u, k] = edge_arc[i * n + j];
      const auto& a = net.adj[u][k];
      // Flow on the forward arc equals the residual of its reverse arc.
      plan[i * n + j] = static_cast<double>(net.adj[a.to][a.rev].cap);
    }
  }
  return plan;
}

ActionVector solve_enumerated(const std::vector<double>& mu,
                              const std::vector<ActionVector>& actions) {
  if (actions.empty()) throw InvalidSpecError("solve_enumerated: empty action list");
  std::size_t best = 0;
  double best_value = expected_value(mu, actions[0]);
  for (std::size_t i = 1; i < actions.size(); ++i) {
    const double v = expected_value(mu, actions[i]);
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }
  return actions[best];
}

std::vector<double> possible_pi(const ActionClassSpec& spec, std::size_t e) {
  if (e >= spec_dimension(spec)) throw std::out_of_range("possible_pi: index out of range");
  std::vector<double> values;
  if (const auto* en = std::get_if<EnumeratedSpec>(&spec)) {
    for (const auto& a : en->actions) values.push_back(a[e]);
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end(),
                             [](double a, double b) { return std::abs(a - b) <= kActionTol; }),
                 values.end());
  } else if (const auto* k = std::get_if<KnapsackSpec>(&spec)) {
    const std::int64_t hi = k->capacity / k->weights[e];
    for (std::int64_t v = 0; v <= hi; ++v) values.push_back(static_cast<double>(v));
  } else {
    const auto& t = std::get<TransportSpec>(spec);
    const std::size_t n = t.demands.size();
    const std::int64_t hi = std::min(t.supplies[e / n], t.demands[e % n]);
    for (std::int64_t v = 0; v <= hi; ++v) values.push_back(static_cast<double>(v));
  }
  return values;
}

namespace {

OracleResult coracle_knapsack(const KnapsackSpec& spec, const std::vector<double>& mu,
                              const AssignmentSet& s) {
  const std::size_t d = spec.weights.size();
  std::int64_t residual = spec.capacity;
  for (const auto& [arm, x] : s.pairs()) {
    residual -= std::llround(x) * spec.weights[arm];
  }
  if (residual < 0) return OracleResult::bottom();

  // Residual problem over the unassigned items only.
  std::vector<double> sub_values;
  std::vector<std::int64_t> sub_weights;
  std::vector<std::size_t> sub_index;
  for (std::size_t e = 0; e < d; ++e) {
    if (s.has_arm(e)) continue;
    sub_values.push_back(mu[e]);
    sub_weights.push_back(spec.weights[e]);
    sub_index.push_back(e);
  }
  const ActionVector sub = solve_knapsack(sub_values, sub_weights, residual);

  ActionVector out(d, 0.0);
  for (const auto& [arm, x] : s.pairs()) out[arm] = x;
  for (std::size_t i = 0; i < sub_index.size(); ++i) out[sub_index[i]] = sub[i];
  return OracleResult::of(std::move(out));
}

OracleResult coracle_transport(const TransportSpec& spec, const std::vector<double>& mu,
                               const AssignmentSet& s) {
  const std::size_t m = spec.supplies.size();
  const std::size_t n = spec.demands.size();
  auto residual_supplies = spec.supplies;
  auto residual_demands = spec.demands;
  // Rewards are negated edge costs; the offline oracle minimizes cost.
  std::vector<double> gamma(m * n);
  for (std::size_t e = 0; e < m * n; ++e) gamma[e] = -mu[e];

  ActionVector fixed(m * n, 0.0);
  for (const auto& [arm, x] : s.pairs()) {
    const std::size_t i = arm / n, j = arm % n;
    const std::int64_t units = std::llround(x);
    fixed[arm] = x;
    residual_supplies[i] -= units;
    residual_demands[j] -= units;
    gamma[arm] = forbidden_cost();  // no extra flow on pinned edges
    if (residual_supplies[i] < 0 || residual_demands[j] < 0) {
      return OracleResult::bottom();
    }
  }

  ActionVector rest;
  try {
    rest = solve_transport(gamma, residual_supplies, residual_demands);
  } catch (const InfeasibleError&) {
    return OracleResult::bottom();
  }
  for (std::size_t e = 0; e < m * n; ++e) rest[e] += fixed[e];
  return OracleResult::of(std::move(rest));
}

OracleResult coracle_enumerated(const EnumeratedSpec& spec, const std::vector<double>& mu,
                                const AssignmentSet& s) {
  std::vector<ActionVector> feasible;
  for (const auto& a : spec.actions) {
    bool ok = true;
    for (const auto& [arm, x] : s.pairs()) {
      if (std::abs(a[arm] - x) > kActionTol) {
        ok = false;
        break;
      }
    }
    if (ok) feasible.push_back(a);
  }
  if (feasible.empty()) return OracleResult::bottom();
  return OracleResult::of(solve_enumerated(mu, feasible));
}

}  // namespace

OracleResult coracle(const ActionClassSpec& spec, const std::vector<double>& mu,
                     const AssignmentSet& s) {
  if (mu.size() != spec_dimension(spec)) throw InvalidSpecError("coracle: mu size mismatch");
  if (const auto* k = std::get_if<KnapsackSpec>(&spec)) return coracle_knapsack(*k, mu, s);
  if (const auto* t = std::get_if<TransportSpec>(&spec)) return coracle_transport(*t, mu, s);
  return coracle_enumerated(std::get<EnumeratedSpec>(spec), mu, s);
}

}  // namespace rcpe
