#pragma once

#include <compare>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "freightcoord/rng.hpp"

namespace fcoord {

class ContractFamily;
class PricingOracle;

/// Dense 0-based load index.
struct LoadId {
  std::size_t index = 0;
  auto operator<=>(const LoadId&) const = default;
};

/// Loads a single contract can execute, sorted ascending by index.
using FeasibleSet = std::vector<LoadId>;

/// Fractional coverage per load, d >= 0.
using DemandVector = std::vector<double>;
/// Integer copies of each load requiring coverage.
using Realization = std::vector<int>;
/// Non-procurement probabilities handed from the spot side to contracts.
using ResidualProfile = std::vector<double>;

/// Dual iterate: per-load penalty lambda and per-contract price mu.
struct ShadowPrices {
  std::vector<double> lambda;
  double mu = 0.0;

  static ShadowPrices zero(std::size_t num_loads) { return {std::vector<double>(num_loads, 0.0), 0.0}; }
  /// lambda^T q - mu * B.
  double linear_value(std::span<const double> q, double capacity) const;
};

/// Full problem description. Immutable once built; share freely across threads.
class Instance {
 public:
  /// `oracles` holds one entry per load (entries may alias the same oracle).
  Instance(std::vector<double> alternate_costs, int capacity, std::shared_ptr<const ContractFamily> family,
           std::vector<std::shared_ptr<const PricingOracle>> oracles, double nu = 0.25);

  /// Same oracle for every load.
  static Instance with_shared_oracle(std::vector<double> alternate_costs, int capacity,
                                     std::shared_ptr<const ContractFamily> family,
                                     std::shared_ptr<const PricingOracle> oracle, double nu = 0.25);

  std::size_t num_loads() const { return alternate_costs_.size(); }
  const std::vector<double>& alternate_costs() const { return alternate_costs_; }
  int capacity() const { return capacity_; }
  double nu() const { return nu_; }
  const ContractFamily& family() const { return *family_; }
  const std::shared_ptr<const ContractFamily>& family_ptr() const { return family_; }
  const PricingOracle& oracle(std::size_t load) const { return *oracles_[load]; }
  const std::vector<std::shared_ptr<const PricingOracle>>& oracles() const { return oracles_; }

  /// A_max = max over feasible sets of the summed alternate cost.
  double max_set_cost() const;
  /// u = largest feasible-set cardinality.
  std::size_t max_set_size() const;

  Instance with_capacity(int capacity) const;

 private:
  std::vector<double> alternate_costs_;
  int capacity_;
  std::shared_ptr<const ContractFamily> family_;
  std::vector<std::shared_ptr<const PricingOracle>> oracles_;
  double nu_;
};

enum class ViolationKind {
  nonpositive_alternate_cost,
  uncovered_load,
  capacity_below_nu_fraction,  // B <= nu * L
  capacity_above_packing_room, // u * B >= (1 - nu) * L
};

struct Violation {
  ViolationKind kind;
  bool warning;  // nu-regime checks are advisory
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  /// No hard violations (warnings allowed).
  bool ok() const;
  bool has(ViolationKind kind) const;
};

ValidationReport validate_instance(const Instance& inst);

/// X_l = floor(d_l) + Bernoulli(frac(d_l)); coordinate l consumes counter l
/// of `stream`, so the draw is independent of evaluation order.
Realization sample_realization(std::span<const double> d, const RngStream& stream);

void check_demand(std::span<const double> d);

}  // namespace fcoord
