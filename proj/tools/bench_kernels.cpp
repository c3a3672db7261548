// Times the OpenMP kernels against their serial reference implementations.
// Set CPE_THREADS to control the parallel side.
#include <chrono>
#include <cstdio>
#include <functional>

#include "rcpe/combsar.hpp"
#include "rcpe/csa.hpp"
#include "rcpe/metrics.hpp"
#include "rcpe/oracles.hpp"
#include "rcpe/parallel.hpp"

using namespace rcpe;

namespace {

double time_ms(const std::function<void()>& fn, int reps) {
  fn();  // warm up
  const auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < reps; ++i) fn();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

std::vector<ActionVector> random_class(RewardStream& rng, std::size_t k, std::size_t d) {
  std::vector<ActionVector> actions;
  actions.reserve(k);
  while (actions.size() < k) {
    ActionVector a(d);
    for (auto& x : a) x = static_cast<double>(rng.uniform_int(0, 6));
    bool dup = false;
    for (const auto& b : actions) dup = dup || action_eq(a, b);
    if (!dup) actions.push_back(std::move(a));
  }
  return actions;
}

}  // namespace

int main() {
  std::printf("threads: %d (cap with CPE_THREADS)\n\n", max_threads());
  std::printf("%-34s %12s %12s %8s\n", "kernel", "reference", "parallel", "speedup");

  {
    RewardStream rng(1);
    const std::size_t k = 220, d = 12;
    const auto actions = random_class(rng, k, d);
    std::vector<double> mu(d);
    for (auto& v : mu) v = rng.uniform_real(-1.0, 1.0);
    // Make the optimum unique so both paths accept the instance.
    mu[0] += 3.0;
    const double ref = time_ms([&] { gap_report_reference(mu, actions); }, 3);
    const double par = time_ms([&] { gap_report(mu, actions); }, 20);
    std::printf("%-34s %10.2fms %10.2fms %7.1fx\n", "gap_report (K=220, d=12)", ref, par,
                ref / par);
  }

  {
    RewardStream rng(2);
    const auto actions = random_class(rng, 1200, 20);
    const double ref = time_ms([&] { lambda_argmax_pair_reference(actions); }, 5);
    const double par = time_ms([&] { lambda_argmax_pair(actions); }, 5);
    std::printf("%-34s %10.2fms %10.2fms %7.1fx\n", "lambda pair scan (K=1200, d=20)", ref, par,
                ref / par);
  }

  {
    RewardStream rng(3);
    const std::size_t k = 800, d = 16;
    const auto actions = random_class(rng, k, d);
    std::vector<double> mu(d);
    for (auto& v : mu) v = rng.uniform_real(-1.0, 1.0);
    const ActionClassSpec spec = EnumeratedSpec{actions};
    const AssignmentSet s;
    const OracleResult incumbent = coracle(spec, mu, s);
    const std::vector<char> active(d, 1);
    const double ref =
        time_ms([&] { probe_alternatives_reference(spec, mu, *incumbent.action, s, active); }, 3);
    const double par =
        time_ms([&] { probe_alternatives(spec, mu, *incumbent.action, s, active); }, 20);
    std::printf("%-34s %10.2fms %10.2fms %7.1fx\n", "csa probes (K=800, d=16)", ref, par,
                ref / par);
  }

  return 0;
}
