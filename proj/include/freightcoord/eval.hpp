#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "freightcoord/core.hpp"
#include "freightcoord/dfw.hpp"
#include "freightcoord/lba.hpp"
#include "freightcoord/parallel.hpp"
#include "freightcoord/pricing.hpp"

namespace fcoord {

struct EvalOptions {
  std::size_t n_samples = 1000;
  std::uint64_t seed = 1;
  ExecMode exec = ExecMode::serial;
  /// Singleton-only families (lane level, edgeless graphs) by exact
  /// Poisson-binomial recursion instead of sampling.
  bool exact_lane = true;
  bool keep_samples = false;
};

struct EvalReport {
  double mean_cost = 0.0;
  double stderr = 0.0;
  double spot_spend = 0.0;       // exact, from the oracles
  double alternate_spend = 0.0;  // contract-side expectation
  double mean_utilization = 0.0; // E[min(B(X), B)]
  std::size_t n_samples = 0;     // 0 in exact mode
  std::uint64_t seed = 0;
  bool exact = false;
  std::vector<double> sample_costs;  // alternate spend per sample when requested
};

/// Cost of running `policies` on spot and covering the residual X ~ q with
/// at most B contracts, the rest paying a_l.
EvalReport evaluate_policy(const Instance& inst, std::span<const PolicySummary> policies,
                           const EvalOptions& options = {});

/// Simulates the bifurcated policy: loads outside S post at w = a_l and pay
/// a_l on a spot failure; loads in S ride their contract.
EvalReport evaluate_lba(const Instance& inst, const LbaResult& lba, const EvalOptions& options = {});

struct Savings {
  double pct = 0.0;
  double se = 0.0;
};

/// 100 (LBA - DFW) / LBA with delta-method SE for independent estimates.
Savings relative_savings(const EvalReport& lba, const EvalReport& dfw);
Savings relative_savings(double lba_mean, double lba_se, double dfw_mean, double dfw_se);

/// Ratio of means over paired draws, SE from the paired delta method.
Savings paired_savings(std::span<const double> lba_costs, std::span<const double> dfw_costs);

struct CheckReport {
  double fluid_value = 0.0, fluid_se = 0.0;
  double fluid_bound = 0.0;     // B - eps * beta / nu
  bool fluid_ok = false;
  bool vacuous = false;         // bound <= 0
  double event_bound = 0.0;     // fluid bound - sqrt(L ln(1/delta) / 2)
  double event_frequency = 0.0; // fraction of samples with U(X) >= event_bound
  bool event_ok = false;
  std::size_t n_samples = 0;

  bool ok() const { return fluid_ok && event_ok; }
};

CheckReport utilization_check(const Instance& inst, const DfwResult& result, double beta_hat, std::size_t n_samples,
                              double delta, std::uint64_t seed = 7);

/// Largest violation of C(X) >= lambda^T X - mu B over sampled X ~ q
/// (<= 0 means weak duality held on every sample).
double weak_duality_violation(const Instance& inst, const ShadowPrices& prices, std::span<const double> q,
                              std::size_t n_samples, std::uint64_t seed);

struct OptOracleResult {
  double opt_cost = 0.0;
  std::vector<double> prices;
};

/// Exhaustive OPT over posted-price vectors on `grid` for tiny instances with
/// static oracles; expectation over all 2^L acceptance outcomes is exact.
OptOracleResult brute_force_opt(const Instance& inst, std::span<const double> grid);

}  // namespace fcoord
