#include "freightcoord/dfw.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "freightcoord/error.hpp"

namespace fcoord {

namespace {

constexpr double kGapTolerance = 1e-9;

double checked_gap(double lp_value, double current_value) {
  const double g = lp_value - current_value;
  const double slack = kGapTolerance * std::max(1.0, std::fabs(lp_value));
  if (g < -slack) {
    std::ostringstream msg;
    msg << "negative Frank-Wolfe gap " << g << " (LP value " << lp_value << ", current " << current_value << ")";
    throw ConsistencyError(msg.str());
  }
  return std::max(0.0, g);
}

DfwTraceRow summarize(std::size_t iteration, const ShadowPrices& prices, std::span<const double> q,
                      const std::vector<PolicySummary>& policies, double gap, bool keep_lambda) {
  DfwTraceRow row;
  row.iteration = iteration;
  row.mu = prices.mu;
  row.gap = gap;
  const auto& lam = prices.lambda;
  row.lambda_min = *std::min_element(lam.begin(), lam.end());
  row.lambda_max = *std::max_element(lam.begin(), lam.end());
  double sum = 0.0, qsum = 0.0, psum = 0.0;
  std::size_t posted = 0;
  for (std::size_t l = 0; l < lam.size(); ++l) {
    sum += lam[l];
    qsum += q[l];
    if (auto p = policies[l].posted_price()) {
      psum += *p;
      ++posted;
    }
  }
  row.lambda_mean = sum / static_cast<double>(lam.size());
  row.q_mean = qsum / static_cast<double>(lam.size());
  row.price_mean = posted ? psum / static_cast<double>(posted) : 0.0;
  if (keep_lambda) row.lambda = lam;
  return row;
}

}  // namespace

ResidualProfile DfwResult::residual() const {
  ResidualProfile q(policies.size());
  for (std::size_t l = 0; l < policies.size(); ++l) q[l] = policies[l].non_procurement;
  return q;
}

double DfwResult::spot_spend() const {
  double s = 0.0;
  for (const auto& p : policies) s += p.spot_cost;
  return s;
}

std::vector<PolicySummary> query_oracles(const Instance& inst, std::span<const double> lambda, ExecMode exec) {
  if (lambda.size() != inst.num_loads()) throw InputError("lambda length does not match the instance");
  std::vector<PolicySummary> out(lambda.size());
  for_each_index(exec, lambda.size(), [&](std::size_t l) { out[l] = inst.oracle(l).best_response(lambda[l]); });
  return out;
}

double fw_gap(const Instance& inst, const ShadowPrices& prices, std::span<const double> q, SimplexOptions options) {
  const DualLpSolution best = solve_dual_lp(inst, q, options);
  const double cap = inst.capacity();
  return checked_gap(best.prices.linear_value(q, cap), prices.linear_value(q, cap));
}

DfwResult run_dfw(const Instance& inst, const DfwConfig& config) {
  if (!(config.epsilon > 0.0) || !std::isfinite(config.epsilon)) throw InputError("epsilon must be positive");
  if (config.max_iterations == 0) throw InputError("max_iterations must be positive");
  const std::size_t L = inst.num_loads();
  const double cap = inst.capacity();
  DualLpSession lp(inst, config.simplex);

  DfwResult result;
  result.epsilon = config.epsilon;
  result.prices = ShadowPrices::zero(L);
  std::size_t updates = 0;
  for (;;) {
    result.policies = query_oracles(inst, result.prices.lambda, config.exec);
    const ResidualProfile q = result.residual();
    const DualLpSolution vertex = lp.solve(q);
    ++result.iterations;
    const double g = checked_gap(vertex.prices.linear_value(q, cap), result.prices.linear_value(q, cap));
    result.final_gap = g;
    result.trace.push_back(summarize(result.iterations, result.prices, q, result.policies, g, config.trace));
    if (g <= config.epsilon) {
      result.converged = true;
      break;
    }
    if (result.iterations >= config.max_iterations) break;
    const double eta = 2.0 / (static_cast<double>(updates) + 2.0);
    for (std::size_t l = 0; l < L; ++l)
      result.prices.lambda[l] = (1.0 - eta) * result.prices.lambda[l] + eta * vertex.prices.lambda[l];
    result.prices.mu = (1.0 - eta) * result.prices.mu + eta * vertex.prices.mu;
    ++updates;
  }
  return result;
}

double theorem_iteration_cap(double beta, double a_max, double epsilon) {
  if (!(epsilon > 0.0)) throw InputError("epsilon must be positive");
  return std::ceil(beta * a_max * a_max / epsilon);
}

}  // namespace fcoord
