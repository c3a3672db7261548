#include "rcpe/core.hpp"

#include <cmath>
#include <cstdlib>
#include <numeric>
#include <set>

namespace rcpe {

bool action_eq(const ActionVector& a, const ActionVector& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::abs(a[i] - b[i]) > kActionTol) return false;
  }
  return true;
}

double expected_value(const std::vector<double>& mu, const ActionVector& pi) {
  if (mu.size() != pi.size()) {
    throw InvalidSpecError("expected_value: dimension mismatch");
  }
  double v = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) v += mu[i] * pi[i];
  return v;
}

std::size_t spec_dimension(const ActionClassSpec& spec) {
  if (const auto* e = std::get_if<EnumeratedSpec>(&spec)) {
    return e->actions.empty() ? 0 : e->actions.front().size();
  }
  if (const auto* k = std::get_if<KnapsackSpec>(&spec)) {
    return k->weights.size();
  }
  const auto& t = std::get<TransportSpec>(spec);
  return t.supplies.size() * t.demands.size();
}

void validate(const BanditInstance& instance) {
  if (instance.d < 1) throw InvalidSpecError("instance: d must be >= 1");
  if (instance.noise_sigma < 0.0) throw InvalidSpecError("instance: sigma must be >= 0");
  if (instance.mu.size() != instance.d) throw InvalidSpecError("instance: mu length != d");
  if (spec_dimension(instance.spec) != instance.d) {
    throw InvalidSpecError("instance: spec dimension != d");
  }
  if (const auto* e = std::get_if<EnumeratedSpec>(&instance.spec)) {
    if (e->actions.empty()) throw InvalidSpecError("enumerated: empty action list");
    for (const auto& a : e->actions) {
      if (a.size() != instance.d) throw InvalidSpecError("enumerated: action length != d");
      for (double x : a) {
        if (x < 0.0) throw InvalidSpecError("enumerated: negative entry");
      }
    }
    for (std::size_t i = 0; i < e->actions.size(); ++i) {
      for (std::size_t j = i + 1; j < e->actions.size(); ++j) {
        if (action_eq(e->actions[i], e->actions[j])) {
          throw InvalidSpecError("enumerated: duplicate actions");
        }
      }
    }
  } else if (const auto* k = std::get_if<KnapsackSpec>(&instance.spec)) {
    for (auto w : k->weights) {
      if (w < 1) throw InvalidSpecError("knapsack: weights must be >= 1");
    }
    if (k->capacity < 1) throw InvalidSpecError("knapsack: capacity must be >= 1");
  } else {
    const auto& t = std::get<TransportSpec>(instance.spec);
    if (t.supplies.empty() || t.demands.empty()) {
      throw InvalidSpecError("transport: empty marginals");
    }
    std::int64_t s = 0, d = 0;
    for (auto v : t.supplies) {
      if (v < 1) throw InvalidSpecError("transport: supplies must be >= 1");
      s += v;
    }
    for (auto v : t.demands) {
      if (v < 1) throw InvalidSpecError("transport: demands must be >= 1");
      d += v;
    }
    if (s != d) throw InvalidSpecError("transport: unbalanced marginals");
  }
}

namespace {
std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}
}  // namespace

std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> words) {
  std::uint64_t h = splitmix64(base);
  for (std::uint64_t w : words) h = splitmix64(h ^ w);
  return h;
}

std::uint64_t hash_str(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

double sample_reward(const BanditInstance& instance, std::size_t arm, RewardStream& rng) {
  if (arm >= instance.d) throw std::out_of_range("sample_reward: arm out of range");
  return instance.mu[arm] + instance.noise_sigma * rng.next_normal();
}

std::vector<std::optional<double>> empirical_means(const PullLog& log) {
  std::vector<std::optional<double>> out(log.counts.size());
  for (std::size_t s = 0; s < log.counts.size(); ++s) {
    if (log.counts[s] > 0) out[s] = log.sums[s] / static_cast<double>(log.counts[s]);
  }
  return out;
}

std::vector<double> empirical_means_dense(const PullLog& log) {
  std::vector<double> out(log.counts.size());
  for (std::size_t s = 0; s < log.counts.size(); ++s) {
    if (log.counts[s] <= 0) {
      throw DegenerateInstanceError("empirical_means_dense: unpulled arm");
    }
    out[s] = log.sums[s] / static_cast<double>(log.counts[s]);
  }
  return out;
}

}  // namespace rcpe
