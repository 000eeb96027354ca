// Serial reference vs OpenMP kernels: simplex pivot, oracle fan-out, Monte
// Carlo evaluation. Prints wall time per repetition and checks the outputs
// match bitwise.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <functional>
#include <memory>
#include <vector>

#include "freightcoord/config.hpp"
#include "freightcoord/dfw.hpp"
#include "freightcoord/eval.hpp"
#include "freightcoord/lp.hpp"
#include "freightcoord/rng.hpp"

using namespace fcoord;

namespace {

double time_ms(int reps, const std::function<void()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < reps; ++i) body();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

void report(const char* name, double serial, double parallel, bool same) {
  std::printf("%-22s serial %9.3f ms  parallel %9.3f ms  speedup %5.2fx  %s\n", name, serial, parallel,
              serial / parallel, same ? "identical" : "MISMATCH");
}

void bench_pivot() {
  const std::size_t rows = 600, cols = 800;
  RngEngine rng(RngStream(3));
  std::vector<double> base(rows * cols);
  for (double& v : base) v = rng.uniform() < 0.3 ? rng.uniform(-1.0, 1.0) : 0.0;
  base[17 * cols + 23] = 2.5;
  std::vector<double> a = base, b = base;
  std::vector<std::size_t> scratch;
  const double ts = time_ms(20, [&] {
    a = base;
    kernels::pivot_reference({a.data(), rows, cols, cols}, 17, 23, 1e-9);
  });
  const double tp = time_ms(20, [&] {
    b = base;
    kernels::pivot_sparse({b.data(), rows, cols, cols}, 17, 23, 1e-9, ExecMode::parallel, scratch);
  });
  report("simplex pivot", ts, tp, std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0);
}

void bench_oracles() {
  InstanceSpec spec;
  spec.loads = 400;
  spec.capacity = 100;
  spec.alternate_costs = {300.0};
  spec.oracle.type = "logistic";
  const Instance inst = build_instance(spec);
  std::vector<double> lambda(spec.loads);
  for (std::size_t l = 0; l < lambda.size(); ++l) lambda[l] = 50.0 + static_cast<double>(l % 250);
  std::vector<PolicySummary> s, p;
  const double ts = time_ms(3, [&] { s = query_oracles(inst, lambda, ExecMode::serial); });
  const double tp = time_ms(3, [&] { p = query_oracles(inst, lambda, ExecMode::parallel); });
  bool same = s.size() == p.size();
  for (std::size_t l = 0; same && l < s.size(); ++l)
    same = s[l].total == p[l].total && s[l].non_procurement == p[l].non_procurement;
  report("oracle fan-out", ts, tp, same);
}

void bench_eval() {
  ExperimentConfig cfg = er_sweep_config();
  cfg.instance.family.edge_prob = 0.2;
  const Instance inst = build_instance(cfg.instance);
  DfwConfig dcfg;
  dcfg.epsilon = cfg.epsilon;
  const DfwResult r = run_dfw(inst, dcfg);
  EvalOptions eo;
  eo.n_samples = 2000;
  EvalReport s, p;
  const double ts = time_ms(1, [&] { s = evaluate_policy(inst, r.policies, eo); });
  eo.exec = ExecMode::parallel;
  const double tp = time_ms(1, [&] { p = evaluate_policy(inst, r.policies, eo); });
  report("monte carlo eval", ts, tp, s.mean_cost == p.mean_cost && s.stderr == p.stderr);
}

}  // namespace

int main() {
  std::printf("threads: %d\n", num_threads());
  bench_pivot();
  bench_oracles();
  bench_eval();
  return 0;
}
