#include <cstring>
#include <memory>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "freightcoord/config.hpp"
#include "freightcoord/dfw.hpp"
#include "freightcoord/eval.hpp"
#include "freightcoord/lp.hpp"
#include "freightcoord/parallel.hpp"
#include "freightcoord/rng.hpp"

using namespace fcoord;

namespace {

// A single core still runs several OpenMP threads, which is enough to
// exercise the parallel paths.
struct ForceThreads {
  ForceThreads() {
#ifdef _OPENMP
    omp_set_num_threads(4);
#endif
  }
} force_threads;

}  // namespace

TEST_CASE("sparse pivot kernel is bitwise identical to the reference") {
  RngEngine rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t rows = 40 + 30 * trial, cols = 300;
    std::vector<double> base(rows * cols);
    for (double& v : base) v = rng.uniform() < 0.25 ? rng.uniform(-3.0, 3.0) : 0.0;
    const std::size_t r = rows / 2, s = 7;
    base[r * cols + s] = 1.5;
    std::vector<double> a = base, b = base, c = base;
    std::vector<std::size_t> scratch;
    kernels::pivot_reference({a.data(), rows, cols, cols}, r, s, 1e-9);
    kernels::pivot_sparse({b.data(), rows, cols, cols}, r, s, 1e-9, ExecMode::serial, scratch);
    kernels::pivot_sparse({c.data(), rows, cols, cols}, r, s, 1e-9, ExecMode::parallel, scratch);
    CHECK(std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0);
    CHECK(std::memcmp(a.data(), c.data(), a.size() * sizeof(double)) == 0);
  }
}

TEST_CASE("oracle fan-out, DFW and Monte Carlo evaluation match across modes") {
  auto cfg = er_sweep_config();
  cfg.instance.family.edge_prob = 0.1;
  const Instance inst = build_instance(cfg.instance);
  std::vector<double> lambda(inst.num_loads());
  for (std::size_t l = 0; l < lambda.size(); ++l) lambda[l] = 3.0 * static_cast<double>(l);
  const auto s = query_oracles(inst, lambda, ExecMode::serial);
  const auto p = query_oracles(inst, lambda, ExecMode::parallel);
  for (std::size_t l = 0; l < s.size(); ++l) CHECK(s[l].total == p[l].total);

  DfwConfig dc;
  dc.epsilon = cfg.epsilon;
  const DfwResult rs = run_dfw(inst, dc);
  dc.exec = ExecMode::parallel;
  const DfwResult rp = run_dfw(inst, dc);
  CHECK(rs.iterations == rp.iterations);
  CHECK(rs.prices.lambda == rp.prices.lambda);
  CHECK(rs.prices.mu == rp.prices.mu);

  EvalOptions eo;
  eo.n_samples = 400;
  eo.seed = 99;
  const auto es = evaluate_policy(inst, rs.policies, eo);
  eo.exec = ExecMode::parallel;
  const auto ep = evaluate_policy(inst, rs.policies, eo);
  CHECK(es.mean_cost == ep.mean_cost);
  CHECK(es.stderr == ep.stderr);
  CHECK(es.mean_utilization == ep.mean_utilization);

  const LbaResult ls = run_lba(inst, ExecMode::serial), lp = run_lba(inst, ExecMode::parallel);
  CHECK(ls.expected_cost == lp.expected_cost);
}

TEST_CASE("for_each_index rethrows the lowest failing index") {
  std::vector<int> hit(50, 0);
  try {
    for_each_index(ExecMode::parallel, 50, [&](std::size_t i) {
      hit[i] = 1;
      if (i == 13 || i == 37) throw std::runtime_error(std::to_string(i));
    });
    FAIL("expected a throw");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()) == "13");
  }
}
