// Acceptance suite: one PASS/FAIL line per criterion. Run with criterion
// numbers as arguments to select a subset (e.g. `acceptance 1 2 5`).
// `--known-deviation N` marks criterion N as expected to fail (the README
// explains each one); the exit status then ignores its FAIL line but turns
// an unexpected PASS into an error so the list cannot go stale.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <memory>
#include <mutex>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "freightcoord/branch_bound.hpp"
#include "freightcoord/config.hpp"
#include "freightcoord/contracts.hpp"
#include "freightcoord/dfw.hpp"
#include "freightcoord/eval.hpp"
#include "freightcoord/experiments.hpp"
#include "freightcoord/lba.hpp"
#include "freightcoord/lp.hpp"
#include "freightcoord/pricing.hpp"
#include "freightcoord/rng.hpp"

using namespace fcoord;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail << "FAILED: " << what << "; ";
    pass = pass && ok;
  }
};

// Converged runs collected by suites 1-4 for criterion 6.
struct UtilRun {
  std::string label;
  std::shared_ptr<const Instance> inst;
  DfwResult result;
  double beta;
};
std::vector<UtilRun> g_util_runs;
std::mutex g_util_mutex;

void record_util(const std::string& label, const Instance& inst, const DfwResult& r, double beta) {
  if (!r.converged) return;
  std::lock_guard lock(g_util_mutex);
  g_util_runs.push_back({label, std::make_shared<Instance>(inst), r, beta});
}

std::shared_ptr<const PricingOracle> uniform(double lo = 100.0, double hi = 200.0) {
  return std::make_shared<UniformStaticOracle>(lo, hi);
}

Instance example1() {
  return Instance::with_shared_oracle(std::vector<double>(1000, 300.0), 700, std::make_shared<LaneLevelFamily>(1000),
                                      uniform(), 0.25);
}

// 39000 + 300 E[(N - 700)^+], N ~ Bin(1000, 0.7), in log space.
double binomial_reference() {
  long double tail = 0.0L;
  for (int k = 701; k <= 1000; ++k) {
    const double lp = std::lgamma(1001.0) - std::lgamma(k + 1.0) - std::lgamma(1001.0 - k) + k * std::log(0.7) +
                      (1000 - k) * std::log(0.3);
    tail += static_cast<long double>(k - 700) * std::exp(static_cast<long double>(lp));
  }
  return 39000.0 + 300.0 * static_cast<double>(tail);
}

double max_lipschitz(const Instance& inst, double w_max, double step) {
  const auto grid = make_grid(0.0, w_max, step);
  double beta = 0.0;
  const PricingOracle* last = nullptr;
  for (std::size_t l = 0; l < inst.num_loads(); ++l) {
    if (&inst.oracle(l) == last) continue;
    last = &inst.oracle(l);
    beta = std::max(beta, lipschitz_estimate(inst.oracle(l), grid));
  }
  return beta;
}

// ------------------------------------------------------------------ 1

Outcome criterion1() {
  Outcome o;
  const Instance inst = example1();
  const auto t0 = Clock::now();
  const DfwResult r = run_dfw(inst);
  const double secs = seconds_since(t0);
  double worst = 0.0;
  bool prices_ok = true;
  for (std::size_t l = 0; l < inst.num_loads(); ++l) {
    worst = std::max(worst, std::fabs(r.prices.lambda[l] - 160.0));
    const auto p = r.policies[l].posted_price();
    prices_ok = prices_ok && p && std::fabs(*p - 130.0) < 1e-6 && std::fabs(r.policies[l].non_procurement - 0.7) < 1e-9;
  }
  o.require(r.converged, "converged");
  o.require(worst <= 1e-4, "lambda = 160 +- 1e-4");
  o.require(std::fabs(r.final_gap) <= 1e-9, "gap = 0 +- 1e-9");
  o.require(prices_ok, "price 130 and non-procurement 0.7");
  o.require(r.iterations <= 30, "iterations <= 30");
  o.require(secs < 10.0, "runtime < 10 s");
  o.detail << "max |lambda-160| " << worst << ", gap " << r.final_gap << ", " << r.iterations << " LP solves ("
           << r.iterations - 1 << " updates), " << secs << " s";
  record_util("example1", inst, r, 0.005);
  return o;
}

// ------------------------------------------------------------------ 2

Outcome criterion2() {
  Outcome o;
  const Instance inst = example1();
  const LbaResult lba = run_lba(inst);
  const DfwResult r = run_dfw(inst);
  const EvalReport ev = evaluate_policy(inst, r.policies);
  const double ref = binomial_reference();
  const double hp = 40733.82324073990828820874648876890123043;  // 40-digit value from mpmath
  o.require(lba.expected_cost == 60000.0, "LBA = 60000 exactly");
  o.require(ev.exact, "exact binomial-sum mode");
  o.require(ev.mean_cost <= 41000.0, "DFW <= 41000");
  o.require(std::fabs(ev.mean_cost - ref) <= 1e-6 * ref, "DFW equals the independent binomial value");
  o.require(std::fabs(ref - hp) <= 1e-9 * hp, "independent value agrees with the high-precision constant");
  char buf[200];
  std::snprintf(buf, sizeof buf, "LBA %.6f, DFW exact %.9f, reference %.9f", lba.expected_cost, ev.mean_cost, ref);
  o.detail << buf;
  return o;
}

// ------------------------------------------------------------------ 3

Outcome criterion3() {
  Outcome o;
  DfwConfig cfg;
  cfg.epsilon = 1.0;
  const Instance ex1 = example1();
  const DfwResult r = run_dfw(ex1, cfg);
  o.require(r.converged && r.iterations <= 450, "Example 1 at eps = 1 within 450 iterations");
  o.detail << "Example 1 eps=1: " << r.iterations << " LP solves; ";
  record_util("example1-eps1", ex1, r, 0.005);

  RngEngine rng(RngStream(303, 3));
  const int trials = 50;
  double worst_ratio = 0.0;
  int violations = 0;
  for (int t = 0; t < trials; ++t) {
    const std::size_t L = static_cast<std::size_t>(rng.uniform_int(5, 300));
    const double nu = 0.25;
    const int B = static_cast<int>(rng.uniform_int(static_cast<std::int64_t>(std::floor(nu * L)) + 1,
                                                   static_cast<std::int64_t>(std::ceil((1 - nu) * L)) - 1));
    std::vector<double> a(L);
    for (double& v : a) v = rng.uniform(150.0, 400.0);
    const double lo = rng.uniform(50.0, 150.0);
    const double hi = lo + rng.uniform(50.0, 150.0);
    const double eps = std::exp(rng.uniform(std::log(0.1), std::log(10.0)));
    const Instance inst =
        Instance::with_shared_oracle(a, B, std::make_shared<LaneLevelFamily>(L), uniform(lo, hi), nu);
    DfwConfig c;
    c.epsilon = eps;
    const DfwResult res = run_dfw(inst, c);
    const double beta = max_lipschitz(inst, 450.0, 0.5);
    const double cap = theorem_iteration_cap(beta, inst.max_set_cost(), eps);
    const double ratio = static_cast<double>(res.iterations) / cap;
    worst_ratio = std::max(worst_ratio, ratio);
    if (!(res.converged && static_cast<double>(res.iterations) <= cap)) {
      if (violations == 0)
        o.detail << "first violation: L=" << L << " B=" << B << " eps=" << eps << " iterations " << res.iterations
                 << " > cap " << cap << "; ";
      ++violations;
    }
    record_util("lane-random-" + std::to_string(t), inst, res, beta);
  }
  o.require(violations == 0, "every random lane instance within the cap");
  o.detail << trials << " random lane instances, " << violations << " over the cap, worst iterations/cap "
           << worst_ratio;
  return o;
}

// ------------------------------------------------------------------ 4

Outcome criterion4() {
  Outcome o;
  const ExperimentConfig cfg = er_sweep_config();
  const std::vector<double> target = {9.05, -4.82, 12.43, 16.47, 16.58};
  const auto t0 = Clock::now();
  const ExperimentOutput out =
      cmd_sweep(cfg, ExecMode::parallel, [&](std::size_t point, std::size_t draw, const Instance& inst, const DfwResult& r) {
        record_util("er-p" + std::to_string(point) + "-d" + std::to_string(draw), inst, r, 0.005);
      });
  const double secs = seconds_since(t0);
  std::size_t k = 0;
  for (const auto& row : out.rows) {
    if (row.algorithm != "dfw") continue;
    const double s = row.savings_pct.value_or(NAN);
    char buf[160];
    std::snprintf(buf, sizeof buf, "p=%.2f: %.2f%% +- %.2f (target %.2f); ", row.sweep_value.value_or(NAN), s,
                  row.savings_se.value_or(NAN), target[k]);
    o.detail << buf;
    o.require(std::fabs(s - target[k]) <= 0.5, "p=" + format_number(row.sweep_value) + " within 0.5");
    ++k;
  }
  o.require(k == target.size(), "one dfw row per sweep point");
  o.require(secs < 1800.0, "runtime < 30 min");
  o.detail << cfg.sweep->draws << " draws per point, " << secs << " s";
  return o;
}

// ------------------------------------------------------------------ 5

Outcome criterion5() {
  Outcome o;
  const auto grid = make_grid(100.0, 200.0, 10.0);
  const double eps = 1e-3;
  {
    const Instance inst = Instance::with_shared_oracle({300.0, 300.0}, 1, std::make_shared<LaneLevelFamily>(2),
                                                       uniform(), 0.25);
    const OptOracleResult opt = brute_force_opt(inst, grid);
    o.require(opt.opt_cost == 220.0 || std::fabs(opt.opt_cost - 220.0) < 1e-9, "canonical grid-OPT = 220");
    o.require(opt.prices == std::vector<double>({140.0, 140.0}), "canonical OPT at p = (140, 140)");
    o.detail << "canonical OPT " << opt.opt_cost << " at (" << opt.prices[0] << ", " << opt.prices[1] << "); ";
  }
  RngEngine rng(RngStream(505, 5));
  double worst_slack = INFINITY;
  int bad = 0, runs = 0;
  for (std::size_t L = 1; L <= 3; ++L) {
    for (int t = 0; t < 50; ++t) {
      const int B = static_cast<int>(rng.uniform_int(0, static_cast<std::int64_t>(L)));
      std::vector<double> a(L);
      for (double& v : a) v = rng.uniform(100.0, 300.0);
      const Instance inst = Instance::with_shared_oracle(a, B, std::make_shared<LaneLevelFamily>(L), uniform(), 0.25);
      DfwConfig c;
      c.epsilon = eps;
      const DfwResult r = run_dfw(inst, c);
      const double alg = evaluate_policy(inst, r.policies).mean_cost;
      const double opt = brute_force_opt(inst, grid).opt_cost;
      const double bound = 300.0 * std::sqrt(static_cast<double>(L)) / 2.0 + eps;
      worst_slack = std::min(worst_slack, bound - (alg - opt));
      if (alg - opt > bound) ++bad;
      ++runs;
    }
  }
  o.require(bad == 0, "ALG - OPT within 300 sqrt(L)/2 + eps");
  o.detail << runs << " random tiny instances, " << bad << " violations, smallest slack " << worst_slack;
  return o;
}

// ------------------------------------------------------------------ 6

Outcome criterion6() {
  Outcome o;
  if (g_util_runs.empty()) {
    o.require(false, "no converged runs recorded (run criteria 1-4 first)");
    return o;
  }
  std::vector<char> ok(g_util_runs.size(), 0);
  std::vector<double> slack(g_util_runs.size(), 0.0), freq(g_util_runs.size(), 0.0);
  for_each_index(ExecMode::parallel, g_util_runs.size(), [&](std::size_t i) {
    const auto& run = g_util_runs[i];
    const CheckReport rep = utilization_check(*run.inst, run.result, run.beta, 400, 0.05, 1000 + i);
    ok[i] = rep.ok();
    slack[i] = rep.fluid_value + 3.0 * rep.fluid_se - rep.fluid_bound;
    freq[i] = rep.event_frequency;
  });
  std::size_t failed = 0, first = g_util_runs.size();
  for (std::size_t i = 0; i < ok.size(); ++i)
    if (!ok[i]) {
      ++failed;
      first = std::min(first, i);
    }
  o.require(failed == 0, "every converged run meets the fluid bound and the event frequency");
  o.detail << g_util_runs.size() << " converged runs, " << failed << " failing";
  if (failed) o.detail << " (first: " << g_util_runs[first].label << ", slack " << slack[first] << ")";
  o.detail << ", min slack " << *std::min_element(slack.begin(), slack.end()) << ", min event frequency "
           << *std::min_element(freq.begin(), freq.end());
  return o;
}

// ------------------------------------------------------------------ 7

Outcome criterion7() {
  Outcome o;
  RngEngine rng(RngStream(707, 7));
  struct Candidate {
    std::string name;
    std::shared_ptr<const PricingOracle> oracle;
    double min_h;  // tabular q is a step function; h must span a price step
    double beta;
  };
  std::vector<Candidate> pool;
  for (int i = 0; i < 6; ++i) {
    const double lo = rng.uniform(50.0, 150.0), hi = lo + rng.uniform(50.0, 150.0);
    pool.push_back({"uniform", uniform(lo, hi), 0.0, 0.0});
  }
  for (int i = 0; i < 6; ++i) {
    const double k = rng.uniform(0.01, 0.1), x0 = rng.uniform(100.0, 300.0);
    pool.push_back({"logistic", std::make_shared<LogisticStaticOracle>(k, x0, 0.0, 600.0), 0.0, 0.0});
  }
  for (int i = 0; i < 3; ++i) {
    const double lo = rng.uniform(50.0, 150.0), hi = lo + rng.uniform(50.0, 150.0);
    const UniformStaticOracle base(lo, hi);
    const auto grid = make_grid(lo, hi, 1.0);
    pool.push_back({"tabular-replica", std::make_shared<TabularMdpOracle>(TabularMdpOracle::replicate(base, grid)),
                    1.0, 0.0});
  }
  for (int i = 0; i < 3; ++i) {
    TabularMdpOracle::Spec spec;
    spec.horizon = 2 + static_cast<std::size_t>(i);
    spec.num_states = 2;
    spec.prices = make_grid(0.0, 300.0, 10.0);
    spec.accept.assign(spec.horizon, std::vector<std::vector<double>>(2, std::vector<double>(spec.prices.size())));
    spec.transition.assign(spec.horizon, std::vector<std::vector<std::vector<double>>>(
                                             2, std::vector<std::vector<double>>(spec.prices.size())));
    for (std::size_t t = 0; t < spec.horizon; ++t)
      for (std::size_t s = 0; s < 2; ++s) {
        const double x0 = s == 0 ? 150.0 : 200.0;
        for (std::size_t p = 0; p < spec.prices.size(); ++p) {
          spec.accept[t][s][p] = p == 0 ? 0.0 : 1.0 / (1.0 + std::exp(-0.05 * (spec.prices[p] - x0)));
          const double stay = rng.uniform(0.5, 0.9);
          spec.transition[t][s][p] = s == 0 ? std::vector<double>{stay, 1 - stay} : std::vector<double>{1 - stay, stay};
        }
      }
    pool.push_back({"tabular-mdp", std::make_shared<TabularMdpOracle>(spec), 10.0, 0.0});
  }
  for (auto& c : pool) {
    const double step = c.min_h > 0.0 ? c.min_h : 0.25;
    c.beta = lipschitz_estimate(*c.oracle, make_grid(0.0, 700.0, step));
    const auto at0 = c.oracle->best_response(0.0);
    o.require(at0.non_procurement == 1.0 && at0.spot_cost == 0.0, c.name + ": q(0) = 1");
  }
  int fails = 0;
  double worst = 0.0;
  std::string first;
  for (int i = 0; i < 1000; ++i) {
    const Candidate& c = pool[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(pool.size()) - 1))];
    const double h = std::max(c.min_h, 0.01) * rng.uniform(1.0, 5.0);
    const double w = rng.uniform(h, 500.0);
    const double res = envelope_residual(*c.oracle, w, h);
    const auto lo = c.oracle->best_response(w - h), mid = c.oracle->best_response(w), hi = c.oracle->best_response(w + h);
    const bool monotone = lo.non_procurement >= mid.non_procurement - 1e-12 && mid.non_procurement >= hi.non_procurement - 1e-12;
    const bool concave = mid.total >= 0.5 * (lo.total + hi.total) - 1e-9;
    const bool envelope = res <= c.beta * h + 1e-12;
    worst = std::max(worst, res / std::max(c.beta * h, 1e-300));
    if (!(monotone && concave && envelope)) {
      if (fails == 0) first = c.name + " at w=" + std::to_string(w) + " h=" + std::to_string(h);
      ++fails;
    }
  }
  o.require(fails == 0, "q nonincreasing, r concave, residual <= beta h");
  o.detail << "1000 triples over " << pool.size() << " oracles, " << fails << " failures, max residual/(beta h) "
           << worst;
  if (fails) o.detail << " (first " << first << ")";
  return o;
}

// ------------------------------------------------------------------ 8

std::shared_ptr<const ContractFamily> random_family(RngEngine& rng, int kind, std::size_t max_loads) {
  if (kind == 0) return std::make_shared<LaneLevelFamily>(static_cast<std::size_t>(rng.uniform_int(1, max_loads)));
  if (kind == 1) {
    const std::size_t nl = static_cast<std::size_t>(rng.uniform_int(1, max_loads / 2));
    const std::size_t nr = static_cast<std::size_t>(rng.uniform_int(1, max_loads / 2));
    return std::make_shared<BipartiteFamily>(gen_er_bipartite(nl, nr, rng.uniform(0.1, 0.7), rng()));
  }
  const std::size_t L = static_cast<std::size_t>(rng.uniform_int(1, max_loads));
  return std::make_shared<RegionalFamily>(random_regional(L, static_cast<int>(rng.uniform_int(1, 8)),
                                                          static_cast<int>(rng.uniform_int(1, 3)), rng()));
}

Outcome criterion8() {
  Outcome o;
  RngEngine rng(RngStream(808, 8));
  int mismatches = 0;
  std::string first;
  for (int t = 0; t < 500; ++t) {
    const auto fam = random_family(rng, t % 3, 12);
    const std::size_t L = fam->num_loads();
    std::vector<int> x(L);
    std::vector<double> a(L);
    for (std::size_t l = 0; l < L; ++l) {
      x[l] = static_cast<int>(rng.uniform_int(0, 3));
      a[l] = rng.uniform(50.0, 400.0);
    }
    const int cap = static_cast<int>(rng.uniform_int(0, 6));
    const long long fast_b = fam->pack_count(x), slow_b = generic_pack_count(*fam, x);
    const auto fast = fam->assignment_cost(x, cap, a);
    const auto slow = generic_assignment_cost(*fam, x, cap, a);
    const bool same = fast_b == slow_b && std::fabs(fast.cost - slow.cost) <= 1e-9 * std::max(1.0, slow.cost) &&
                      !check_assignment(*fam, x, cap, a, fast) && !check_assignment(*fam, x, cap, a, slow);
    if (!same) {
      if (mismatches == 0) first = fam->kind() + " trial " + std::to_string(t);
      ++mismatches;
    }
  }
  o.require(mismatches == 0, "specialised solvers equal branch and bound");

  int lane_nonzero = 0;
  const LaneLevelFamily lane(12);
  for (int t = 0; t < 500; ++t) {
    std::vector<int> x(12);
    for (int& v : x) v = static_cast<int>(rng.uniform_int(0, 9));
    if (substitutability_gap(lane, x).value != 0.0) ++lane_nonzero;
  }
  o.require(lane_nonzero == 0, "lane-level gap is 0");

  int above = 0;
  double worst = -INFINITY;
  for (int t = 0; t < 500; ++t) {
    const RegionalFamily fam = random_regional(20, 8, 2, rng());
    const double bound = regional_gap_bound(fam);
    std::vector<int> x(20);
    for (int& v : x) v = static_cast<int>(rng.uniform_int(0, 3));
    const Estimate g = substitutability_gap(fam, x, 4000, rng());
    worst = std::max(worst, g.value - bound);
    if (g.value > bound + 3.0 * g.stderr) ++above;
  }
  o.require(above == 0, "regional gaps below sqrt(L K ln T / 2)");
  o.detail << "500 solver comparisons, " << mismatches << " mismatches" << (first.empty() ? "" : " (first " + first + ")")
           << "; 500 lane gaps, " << lane_nonzero << " nonzero; 500 regional gaps (L=20, K=2, T=8), " << above
           << " above bound, max gap - bound " << worst;
  return o;
}

// ------------------------------------------------------------------ 9

Outcome criterion9() {
  Outcome o;
  RngEngine rng(RngStream(909, 9));
  int bad = 0;
  double worst = 0.0;
  for (int t = 0; t < 500; ++t) {
    const auto fam = random_family(rng, t % 3, 14);
    const std::size_t L = fam->num_loads();
    std::vector<double> a(L), q(L);
    for (std::size_t l = 0; l < L; ++l) {
      a[l] = rng.uniform(50.0, 400.0);
      q[l] = rng.bernoulli(0.1) ? 0.0 : rng.uniform();
    }
    const Instance inst =
        Instance::with_shared_oracle(a, static_cast<int>(rng.uniform_int(0, 5)), fam, uniform(), 0.25);
    const double dual = solve_dual_lp(inst, q).objective;
    const double primal = solve_fractional_primal(inst, q).objective;
    const double rel = std::fabs(dual - primal) / std::max(1.0, std::fabs(primal));
    worst = std::max(worst, rel);
    if (rel > 1e-6) ++bad;
  }
  o.require(bad == 0, "primal = dual within 1e-6 relative");
  o.detail << "500 (instance, q) pairs, " << bad << " disagreements, worst relative gap " << worst;
  return o;
}

// ------------------------------------------------------------------ 10

Outcome criterion10() {
  Outcome o;
  const std::string dir = FREIGHTCOORD_CONFIG_DIR;
  auto check_rows = [&](const std::string& name, const ExperimentOutput& out) {
    std::vector<const ResultRow*> dfw, lba;
    for (const auto& r : out.rows) (r.algorithm == "dfw" ? dfw : lba).push_back(&r);
    o.require(!dfw.empty() && dfw.size() == lba.size(), name + ": paired rows");
    for (std::size_t i = 0; i < std::min(dfw.size(), lba.size()); ++i) {
      const bool ok = dfw[i]->mean_cost <= lba[i]->mean_cost + 3.0 * dfw[i]->stderr;
      o.require(ok, name + ": DFW <= LBA + 3 SE at " + (dfw[i]->sweep_value ? format_number(dfw[i]->sweep_value) : "base"));
      o.detail << name << (dfw[i]->sweep_value ? "[" + format_number(dfw[i]->sweep_value) + "]" : "") << " DFW "
               << format_number(dfw[i]->mean_cost) << " vs LBA " << format_number(lba[i]->mean_cost) << " ("
               << format_number(dfw[i]->savings_pct) << "%); ";
    }
  };
  const auto sig = load_config(dir + "/sigmoid_lane_standin.json");
  check_rows("sigmoid", run_comparison(sig, ExecMode::parallel));
  const auto bip = load_config(dir + "/bipartite_standin.json");
  check_rows("bipartite", cmd_bipartite(bip, ExecMode::parallel));
  o.detail << "stand-in parameters; the published sigmoid and round-trip figures are not reproduction targets";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"example-1 fixed point", criterion1},
      {"example-1 costs", criterion2},
      {"iteration cap", criterion3},
      {"erdos-renyi sweep", criterion4},
      {"regret on tiny instances", criterion5},
      {"utilization", criterion6},
      {"oracle properties", criterion7},
      {"packing equivalence", criterion8},
      {"strong duality", criterion9},
      {"stand-in pipelines", criterion10},
  };
  std::set<int> selected, known;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--known-deviation" && i + 1 < argc) known.insert(std::atoi(argv[++i]));
    else selected.insert(std::atoi(argv[i]));
  }
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!selected.empty() && !selected.count(id)) continue;
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "exception: " << e.what();
    }
    std::printf("%s %2d %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", id, criteria[i].first.c_str(),
                o.detail.str().c_str(), seconds_since(t0));
    std::fflush(stdout);
    if (o.pass == static_cast<bool>(known.count(id))) ++failures;
  }
  if (!known.empty()) {
    std::printf("known deviations:");
    for (int k : known) std::printf(" %d", k);
    std::printf("\n");
  }
  return failures == 0 ? 0 : 1;
}
