#include <cmath>
#include <memory>
#include <vector>

#include "doctest.h"
#include "freightcoord/contracts.hpp"
#include "freightcoord/dfw.hpp"
#include "freightcoord/eval.hpp"
#include "freightcoord/lba.hpp"
#include "freightcoord/pricing.hpp"

using namespace fcoord;

namespace {

std::shared_ptr<const PricingOracle> uniform() { return std::make_shared<UniformStaticOracle>(100.0, 200.0); }

Instance lane(std::size_t L, int B) {
  return Instance::with_shared_oracle(std::vector<double>(L, 300.0), B, std::make_shared<LaneLevelFamily>(L), uniform(),
                                      0.25);
}

// 39000 + 300 E[(N - 700)^+], N ~ Bin(1000, 0.7), via log-space pmf.
double example1_exact() {
  const int n = 1000;
  const double p = 0.7;
  long double tail = 0.0L;
  for (int k = 701; k <= n; ++k) {
    const double lp = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) + k * std::log(p) +
                      (n - k) * std::log1p(-p);
    tail += static_cast<long double>(k - 700) * std::exp(static_cast<long double>(lp));
  }
  return 39000.0 + 300.0 * static_cast<double>(tail);
}

}  // namespace

TEST_CASE("independent binomial value matches the high-precision constant") {
  CHECK(example1_exact() == doctest::Approx(40733.82324073990828820874648876890123043).epsilon(1e-10));
}

TEST_CASE("Example 1 LBA") {
  const LbaResult r = run_lba(lane(1000, 700));
  CHECK(r.expected_cost == doctest::Approx(60000.0));
  CHECK(r.contract_set().size() == 700);
  for (double a : r.alpha) CHECK(a == doctest::Approx(200.0));
  const auto mc = evaluate_lba(lane(1000, 700), r, EvalOptions{200, 3});
  CHECK(mc.mean_cost == doctest::Approx(60000.0));
  CHECK(mc.stderr == doctest::Approx(0.0));
}

TEST_CASE("LBA without contracts pays every alpha") {
  const LbaResult r = run_lba(lane(10, 0));
  CHECK(r.contract_set().empty());
  CHECK(r.expected_cost == doctest::Approx(2000.0));
}

TEST_CASE("LBA on the bipartite triangle") {
  const Instance inst = Instance::with_shared_oracle(
      {300.0, 300.0, 300.0}, 1, std::make_shared<BipartiteFamily>(2, 1, std::vector<BipartiteFamily::Edge>{{0, 0}, {1, 0}}),
      uniform(), 0.25);
  const LbaResult r = run_lba(inst);
  CHECK(r.expected_cost == doctest::Approx(200.0));
  REQUIRE(r.contracts.size() == 1);
  CHECK(r.contracts[0].size() == 2);
}

TEST_CASE("Example 1 DFW cost: exact mode and Monte Carlo") {
  const Instance inst = lane(1000, 700);
  const DfwResult r = run_dfw(inst);
  const auto exact = evaluate_policy(inst, r.policies);
  CHECK(exact.exact);
  CHECK(exact.mean_cost == doctest::Approx(example1_exact()).epsilon(1e-9));
  CHECK(exact.mean_cost <= 41000.0);
  CHECK(exact.spot_spend == doctest::Approx(39000.0));
  EvalOptions mc;
  mc.exact_lane = false;
  mc.n_samples = 4000;
  mc.seed = 12;
  const auto sampled = evaluate_policy(inst, r.policies, mc);
  CHECK_FALSE(sampled.exact);
  CHECK(std::fabs(sampled.mean_cost - exact.mean_cost) <= 3.0 * sampled.stderr);
}

TEST_CASE("policies that always procure cost their spot spend") {
  const Instance inst = lane(5, 1);
  std::vector<PolicySummary> pol(5);
  for (auto& p : pol) {
    p.non_procurement = 0.0;
    p.spot_cost = 180.0;
    p.total = 180.0;
  }
  EvalOptions mc;
  mc.exact_lane = false;
  const auto rep = evaluate_policy(inst, pol, mc);
  CHECK(rep.mean_cost == doctest::Approx(900.0));
  CHECK(rep.stderr == 0.0);
}

TEST_CASE("relative savings arithmetic") {
  CHECK(relative_savings(60000.0, 0.0, 40733.82, 0.0).pct == doctest::Approx(32.11).epsilon(1e-3));
  CHECK(relative_savings(500.0, 1.0, 500.0, 1.0).pct == doctest::Approx(0.0));
  const std::vector<double> lba = {100.0, 110.0, 90.0}, dfw = {80.0, 90.0, 70.0};
  const Savings s = paired_savings(lba, dfw);
  CHECK(s.pct == doctest::Approx(100.0 * 60.0 / 300.0));
  CHECK(s.se >= 0.0);
}

TEST_CASE("utilization check on Example 1") {
  const Instance inst = lane(1000, 700);
  const DfwResult r = run_dfw(inst);
  const CheckReport rep = utilization_check(inst, r, 0.005, 500, 0.05);
  CHECK(rep.fluid_value == doctest::Approx(700.0));
  CHECK(rep.fluid_ok);
  CHECK(rep.event_ok);
  CHECK_FALSE(rep.vacuous);
}

TEST_CASE("a huge tolerance makes the utilization bound vacuous") {
  const Instance inst = lane(20, 5);
  DfwConfig cfg;
  cfg.epsilon = 1e6;
  const DfwResult r = run_dfw(inst, cfg);
  const CheckReport rep = utilization_check(inst, r, 0.005, 200, 0.05);
  CHECK(rep.vacuous);
  CHECK(rep.ok());
}

TEST_CASE("weak duality holds at the DFW fixed point") {
  const Instance inst = lane(50, 20);
  const DfwResult r = run_dfw(inst);
  CHECK(weak_duality_violation(inst, r.prices, r.residual(), 500, 4) <= 1e-9);
}

TEST_CASE("brute-force OPT spot values") {
  const auto grid = make_grid(100.0, 200.0, 10.0);
  // Withholding one load (p = 100 is never accepted) for the contract and
  // posting the other at 200 costs 200, below the best common price.
  const auto two = brute_force_opt(lane(2, 1), grid);
  CHECK(two.opt_cost == doctest::Approx(200.0));
  CHECK(two.prices == std::vector<double>{100.0, 200.0});
  double symmetric = INFINITY, at = 0.0;
  for (double p : grid) {
    const double f = 2.0 * p * (p - 100.0) / 100.0 + 3.0 * (200.0 - p) * (200.0 - p) / 100.0;
    if (f < symmetric) symmetric = f, at = p;
  }
  CHECK(symmetric == doctest::Approx(220.0));
  CHECK(at == 140.0);
  CHECK(brute_force_opt(lane(1, 1), grid).opt_cost == doctest::Approx(0.0));
  const auto none = brute_force_opt(lane(2, 0), grid);
  CHECK(none.opt_cost == doctest::Approx(400.0));
  CHECK(none.prices == std::vector<double>{200.0, 200.0});
}
