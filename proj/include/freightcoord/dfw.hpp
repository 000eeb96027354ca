#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "freightcoord/core.hpp"
#include "freightcoord/lp.hpp"
#include "freightcoord/parallel.hpp"
#include "freightcoord/pricing.hpp"

namespace fcoord {

struct DfwConfig {
  double epsilon = 1e-6;
  std::size_t max_iterations = 100000;
  bool trace = false;  // keep full lambda vectors in the trace
  ExecMode exec = ExecMode::serial;
  SimplexOptions simplex{};
};

struct DfwTraceRow {
  std::size_t iteration = 0;  // 1-based LP solve count
  double mu = 0.0;
  double gap = 0.0;
  double lambda_min = 0.0, lambda_mean = 0.0, lambda_max = 0.0;
  double q_mean = 0.0;
  double price_mean = 0.0;  // mean posted price over loads with a posted-price policy
  std::vector<double> lambda;  // only when DfwConfig::trace
};

struct DfwResult {
  ShadowPrices prices;
  std::size_t iterations = 0;  // LP solves performed
  double final_gap = 0.0;
  bool converged = false;
  double epsilon = 0.0;
  std::vector<PolicySummary> policies;  // best responses at w = lambda
  std::vector<DfwTraceRow> trace;

  ResidualProfile residual() const;
  double spot_spend() const;
};

/// Best responses of every load at w = lambda_l, gathered by load index.
std::vector<PolicySummary> query_oracles(const Instance& inst, std::span<const double> lambda,
                                         ExecMode exec = ExecMode::serial);

/// (lambda_hat^T q - mu_hat B) - (lambda^T q - mu B) with the LP optimum at q.
/// Throws ConsistencyError when the gap is below -1e-9.
double fw_gap(const Instance& inst, const ShadowPrices& prices, std::span<const double> q,
              SimplexOptions options = {});

DfwResult run_dfw(const Instance& inst, const DfwConfig& config = {});

/// ceil(beta * A_max^2 / epsilon).
double theorem_iteration_cap(double beta, double a_max, double epsilon);

}  // namespace fcoord
