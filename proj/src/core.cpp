#include "freightcoord/core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "freightcoord/contracts.hpp"
#include "freightcoord/error.hpp"
#include "freightcoord/pricing.hpp"

namespace fcoord {

double ShadowPrices::linear_value(std::span<const double> q, double capacity) const {
  if (q.size() != lambda.size()) throw InputError("residual profile length does not match lambda");
  double v = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) v += lambda[i] * q[i];
  return v - mu * capacity;
}

Instance::Instance(std::vector<double> alternate_costs, int capacity, std::shared_ptr<const ContractFamily> family,
                   std::vector<std::shared_ptr<const PricingOracle>> oracles, double nu)
    : alternate_costs_(std::move(alternate_costs)),
      capacity_(capacity),
      family_(std::move(family)),
      oracles_(std::move(oracles)),
      nu_(nu) {
  if (alternate_costs_.empty()) throw InputError("instance needs at least one load");
  if (capacity_ < 0) throw InputError("capacity must be nonnegative");
  if (!family_) throw InputError("instance needs a contract family");
  if (family_->num_loads() != alternate_costs_.size())
    throw InputError("contract family and alternate costs disagree on the number of loads");
  if (oracles_.size() != alternate_costs_.size()) throw InputError("need one pricing oracle per load");
  for (const auto& o : oracles_)
    if (!o) throw InputError("null pricing oracle");
  for (double a : alternate_costs_)
    if (!std::isfinite(a)) throw InputError("alternate costs must be finite");
  if (!(nu_ > 0.0 && nu_ < 0.5)) throw InputError("nu must lie in (0, 1/2)");
}

Instance Instance::with_shared_oracle(std::vector<double> alternate_costs, int capacity,
                                      std::shared_ptr<const ContractFamily> family,
                                      std::shared_ptr<const PricingOracle> oracle, double nu) {
  std::vector<std::shared_ptr<const PricingOracle>> oracles(alternate_costs.size(), oracle);
  return Instance(std::move(alternate_costs), capacity, std::move(family), std::move(oracles), nu);
}

double Instance::max_set_cost() const { return family_->max_weight_set(alternate_costs_).weight; }

std::size_t Instance::max_set_size() const { return family_->max_set_size(); }

Instance Instance::with_capacity(int capacity) const {
  return Instance(alternate_costs_, capacity, family_, oracles_, nu_);
}

bool ValidationReport::ok() const {
  return std::none_of(violations.begin(), violations.end(), [](const Violation& v) { return !v.warning; });
}

bool ValidationReport::has(ViolationKind kind) const {
  return std::any_of(violations.begin(), violations.end(), [&](const Violation& v) { return v.kind == kind; });
}

ValidationReport validate_instance(const Instance& inst) {
  ValidationReport report;
  const auto& a = inst.alternate_costs();
  for (std::size_t l = 0; l < a.size(); ++l) {
    if (!(a[l] > 0.0)) {
      std::ostringstream msg;
      msg << "alternate cost of load " << l << " is " << a[l] << ", must be positive";
      report.violations.push_back({ViolationKind::nonpositive_alternate_cost, false, msg.str()});
    }
  }
  for (std::size_t l = 0; l < inst.num_loads(); ++l) {
    if (!inst.family().covers(l)) {
      report.violations.push_back(
          {ViolationKind::uncovered_load, false, "load " + std::to_string(l) + " is in no feasible set"});
    }
  }
  const double L = static_cast<double>(inst.num_loads());
  const double B = inst.capacity();
  const double u = static_cast<double>(inst.max_set_size());
  const double nu = inst.nu();
  if (!(B > nu * L)) {
    std::ostringstream msg;
    msg << "B = " << B << " is not above nu * L = " << nu * L;
    report.violations.push_back({ViolationKind::capacity_below_nu_fraction, true, msg.str()});
  }
  if (!(u * B < (1.0 - nu) * L)) {
    std::ostringstream msg;
    msg << "u * B = " << u * B << " is not below (1 - nu) * L = " << (1.0 - nu) * L;
    report.violations.push_back({ViolationKind::capacity_above_packing_room, true, msg.str()});
  }
  return report;
}

void check_demand(std::span<const double> d) {
  for (std::size_t l = 0; l < d.size(); ++l)
    if (!std::isfinite(d[l]) || d[l] < 0.0)
      throw InputError("demand of load " + std::to_string(l) + " must be finite and nonnegative");
}

Realization sample_realization(std::span<const double> d, const RngStream& stream) {
  check_demand(d);
  Realization x(d.size());
  for (std::size_t l = 0; l < d.size(); ++l) {
    const double base = std::floor(d[l]);
    const double frac = d[l] - base;
    int v = static_cast<int>(base);
    if (frac > 0.0 && stream.uniform(l) < frac) ++v;
    x[l] = v;
  }
  return x;
}

}  // namespace fcoord
