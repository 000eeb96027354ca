#include "freightcoord/eval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "freightcoord/contracts.hpp"
#include "freightcoord/error.hpp"

namespace fcoord {

namespace {

struct Moments {
  double mean = 0.0, se = 0.0;
};

Moments moments(std::span<const double> v) {
  Moments m;
  if (v.empty()) return m;
  const double n = static_cast<double>(v.size());
  double sum = 0.0;
  for (double x : v) sum += x;
  m.mean = sum / n;
  if (v.size() > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - m.mean) * (x - m.mean);
    m.se = std::sqrt(ss / (n - 1.0) / n);
  }
  return m;
}

ResidualProfile residual_of(std::span<const PolicySummary> policies) {
  ResidualProfile q(policies.size());
  for (std::size_t l = 0; l < policies.size(); ++l) q[l] = policies[l].non_procurement;
  return q;
}

// Lane-level contracts cover the B realized loads with the largest a. Walking
// loads in that order, load k is covered iff it is realized and fewer than B
// earlier loads were; N counts realized earlier loads, truncated at B.
void exact_lane(const Instance& inst, std::span<const double> q, double& alternate, double& utilization) {
  const auto& a = inst.alternate_costs();
  const std::size_t L = q.size();
  const auto B = static_cast<std::size_t>(inst.capacity());
  std::vector<std::size_t> order(L);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return a[i] > a[j]; });
  std::vector<double> dist(B + 1, 0.0), next(B + 1);
  dist[0] = 1.0;  // dist[n] = P(N = n), dist[B] = P(N >= B)
  alternate = 0.0;
  utilization = 0.0;
  for (std::size_t l : order) {
    const double p = q[l];
    double room = 0.0;
    for (std::size_t n = 0; n < B; ++n) room += dist[n];
    // Covered only when a contract is left and the value is worth covering.
    const double covered = a[l] > 0.0 ? room : 0.0;
    alternate += a[l] * p * (1.0 - covered);
    utilization += p * covered;
    if (p == 0.0) continue;
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t n = 0; n <= B; ++n) {
      next[n] += dist[n] * (1.0 - p);
      next[std::min(n + 1, B)] += dist[n] * p;
    }
    std::swap(dist, next);
  }
}

// Families with u = 1 covering every load behave exactly like lane-level.
bool singletons_only(const ContractFamily& family) {
  if (family.max_set_size() != 1) return false;
  for (std::size_t l = 0; l < family.num_loads(); ++l)
    if (!family.covers(l)) return false;
  return true;
}

}  // namespace

EvalReport evaluate_policy(const Instance& inst, std::span<const PolicySummary> policies, const EvalOptions& options) {
  if (policies.size() != inst.num_loads()) throw InputError("need one policy per load");
  EvalReport report;
  report.seed = options.seed;
  for (const auto& p : policies) report.spot_spend += p.spot_cost;
  const ResidualProfile q = residual_of(policies);

  if (options.exact_lane && singletons_only(inst.family())) {
    exact_lane(inst, q, report.alternate_spend, report.mean_utilization);
    report.exact = true;
    report.mean_cost = report.spot_spend + report.alternate_spend;
    return report;
  }
  if (options.n_samples < 2) throw InputError("Monte Carlo evaluation needs at least two samples");

  const std::size_t n = options.n_samples;
  std::vector<double> cost(n), util(n);
  const RngStream root(options.seed);
  const auto& family = inst.family();
  const auto& a = inst.alternate_costs();
  for_each_index(options.exec, n, [&](std::size_t k) {
    const Realization x = sample_realization(q, root.substream(k));
    try {
      cost[k] = assignment_cost(family, x, inst.capacity(), a).cost;
      util[k] = static_cast<double>(std::min<long long>(pack_count(family, x), inst.capacity()));
    } catch (const CapabilityError& e) {
      throw CapabilityError("sample " + std::to_string(k) + ": " + e.what());
    }
  });
  const Moments c = moments(cost), u = moments(util);
  report.alternate_spend = c.mean;
  report.stderr = c.se;
  report.mean_utilization = u.mean;
  report.mean_cost = report.spot_spend + c.mean;
  report.n_samples = n;
  if (options.keep_samples) report.sample_costs = std::move(cost);
  return report;
}

EvalReport evaluate_lba(const Instance& inst, const LbaResult& lba, const EvalOptions& options) {
  const std::size_t L = inst.num_loads();
  if (lba.on_contract.size() != L || lba.policies.size() != L) throw InputError("LBA result does not match instance");
  if (options.n_samples < 2) throw InputError("Monte Carlo evaluation needs at least two samples");
  const auto& a = inst.alternate_costs();
  EvalReport report;
  report.seed = options.seed;
  std::vector<std::size_t> spot;
  for (std::size_t l = 0; l < L; ++l) {
    if (lba.on_contract[l]) continue;
    spot.push_back(l);
    report.spot_spend += lba.policies[l].spot_cost;
  }
  const std::size_t n = options.n_samples;
  std::vector<double> cost(n);
  const RngStream root(options.seed);
  for_each_index(options.exec, n, [&](std::size_t k) {
    const RngStream s = root.substream(k);
    double c = 0.0;
    for (std::size_t l : spot)
      if (s.uniform(l) < lba.policies[l].non_procurement) c += a[l];
    cost[k] = c;
  });
  const Moments m = moments(cost);
  report.alternate_spend = m.mean;
  report.stderr = m.se;
  report.mean_cost = report.spot_spend + m.mean;
  report.mean_utilization = static_cast<double>(lba.contracts.size());
  report.n_samples = n;
  if (options.keep_samples) report.sample_costs = std::move(cost);
  return report;
}

Savings relative_savings(double lba_mean, double lba_se, double dfw_mean, double dfw_se) {
  if (!(lba_mean > 0.0)) throw InputError("relative savings undefined for nonpositive LBA cost");
  Savings s;
  s.pct = 100.0 * (lba_mean - dfw_mean) / lba_mean;
  const double d_lba = 100.0 * dfw_mean / (lba_mean * lba_mean);
  const double d_dfw = 100.0 / lba_mean;
  s.se = std::sqrt(d_lba * d_lba * lba_se * lba_se + d_dfw * d_dfw * dfw_se * dfw_se);
  return s;
}

Savings relative_savings(const EvalReport& lba, const EvalReport& dfw) {
  return relative_savings(lba.mean_cost, lba.stderr, dfw.mean_cost, dfw.stderr);
}

Savings paired_savings(std::span<const double> lba_costs, std::span<const double> dfw_costs) {
  if (lba_costs.size() != dfw_costs.size() || lba_costs.empty()) throw InputError("paired savings needs matched draws");
  const Moments l = moments(lba_costs), d = moments(dfw_costs);
  if (!(l.mean > 0.0)) throw InputError("relative savings undefined for nonpositive LBA cost");
  Savings s;
  const double r = d.mean / l.mean;
  s.pct = 100.0 * (1.0 - r);
  const std::size_t n = lba_costs.size();
  if (n > 1) {
    // Linearised ratio residuals D_i - r L_i.
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double e = dfw_costs[i] - r * lba_costs[i];
      ss += e * e;
    }
    const double var = ss / static_cast<double>(n - 1) / static_cast<double>(n);
    s.se = 100.0 * std::sqrt(var) / l.mean;
  }
  return s;
}

CheckReport utilization_check(const Instance& inst, const DfwResult& result, double beta_hat, std::size_t n_samples,
                              double delta, std::uint64_t seed) {
  if (!(delta > 0.0 && delta < 1.0)) throw InputError("delta must lie in (0, 1)");
  CheckReport rep;
  const ResidualProfile q = result.residual();
  const double B = inst.capacity();
  const double L = static_cast<double>(inst.num_loads());
  const Estimate fluid = fluid_pack(inst.family(), q, std::max<std::size_t>(n_samples, 2), seed);
  rep.fluid_value = fluid.value;
  rep.fluid_se = fluid.stderr;
  rep.fluid_bound = B - result.epsilon * beta_hat / inst.nu();
  rep.vacuous = rep.fluid_bound <= 0.0;
  rep.fluid_ok = rep.vacuous || fluid.value >= rep.fluid_bound - 3.0 * fluid.stderr - 1e-9;
  rep.event_bound = rep.fluid_bound - std::sqrt(L * std::log(1.0 / delta) / 2.0);
  const RngStream root(seed ^ 0xC0FFEEULL);
  std::size_t hits = 0;
  for (std::size_t k = 0; k < n_samples; ++k) {
    const Realization x = sample_realization(q, root.substream(k));
    const double u = static_cast<double>(std::min<long long>(pack_count(inst.family(), x), inst.capacity()));
    if (u >= rep.event_bound) ++hits;
  }
  rep.n_samples = n_samples;
  rep.event_frequency = n_samples ? static_cast<double>(hits) / static_cast<double>(n_samples) : 1.0;
  rep.event_ok = rep.event_frequency >= 1.0 - delta;
  return rep;
}

double weak_duality_violation(const Instance& inst, const ShadowPrices& prices, std::span<const double> q,
                              std::size_t n_samples, std::uint64_t seed) {
  const RngStream root(seed);
  double worst = -kInf;
  for (std::size_t k = 0; k < n_samples; ++k) {
    const Realization x = sample_realization(q, root.substream(k));
    const double c = assignment_cost(inst.family(), x, inst.capacity(), inst.alternate_costs()).cost;
    double lower = -prices.mu * inst.capacity();
    for (std::size_t l = 0; l < x.size(); ++l) lower += prices.lambda[l] * x[l];
    worst = std::max(worst, lower - c);
  }
  return worst;
}

OptOracleResult brute_force_opt(const Instance& inst, std::span<const double> grid) {
  const std::size_t L = inst.num_loads();
  if (L > 5) throw CapabilityError("brute-force OPT supports at most 5 loads");
  if (grid.empty()) throw InputError("price grid is empty");
  std::vector<const StaticPricingOracle*> oracles(L);
  for (std::size_t l = 0; l < L; ++l) {
    oracles[l] = dynamic_cast<const StaticPricingOracle*>(&inst.oracle(l));
    if (!oracles[l]) throw CapabilityError("brute-force OPT needs static single-period oracles");
  }
  double combos = 1.0;
  for (std::size_t l = 0; l < L; ++l) combos *= static_cast<double>(grid.size());
  if (combos > 1e6) throw CapabilityError("price grid too large for brute-force OPT");

  // C(X) for every failure pattern X in {0,1}^L.
  const std::size_t outcomes = std::size_t{1} << L;
  std::vector<double> contract_cost(outcomes);
  for (std::size_t mask = 0; mask < outcomes; ++mask) {
    std::vector<int> x(L);
    for (std::size_t l = 0; l < L; ++l) x[l] = (mask >> l) & 1;
    contract_cost[mask] = assignment_cost(inst.family(), x, inst.capacity(), inst.alternate_costs()).cost;
  }
  std::vector<std::vector<double>> accept(L, std::vector<double>(grid.size()));
  for (std::size_t l = 0; l < L; ++l)
    for (std::size_t g = 0; g < grid.size(); ++g) accept[l][g] = oracles[l]->acceptance(grid[g]);

  OptOracleResult best;
  best.opt_cost = kInf;
  std::vector<std::size_t> idx(L, 0);
  for (;;) {
    double value = 0.0;
    for (std::size_t l = 0; l < L; ++l) value += grid[idx[l]] * accept[l][idx[l]];
    for (std::size_t mask = 0; mask < outcomes; ++mask) {
      double p = 1.0;
      for (std::size_t l = 0; l < L && p != 0.0; ++l) {
        const double f = accept[l][idx[l]];
        p *= (mask >> l & 1) ? 1.0 - f : f;
      }
      value += p * contract_cost[mask];
    }
    if (value < best.opt_cost - 1e-12) {
      best.opt_cost = value;
      best.prices.resize(L);
      for (std::size_t l = 0; l < L; ++l) best.prices[l] = grid[idx[l]];
    }
    // Lexicographic order, so ties resolve to the smallest price vector.
    std::size_t l = L;
    while (l > 0 && ++idx[l - 1] == grid.size()) idx[--l] = 0;
    if (l == 0) break;
  }
  return best;
}

}  // namespace fcoord
