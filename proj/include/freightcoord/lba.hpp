#pragma once

#include <vector>

#include "freightcoord/contracts.hpp"
#include "freightcoord/core.hpp"
#include "freightcoord/parallel.hpp"
#include "freightcoord/pricing.hpp"

namespace fcoord {

/// Load Bifurcation: loads in `contract_set` ride contracts for sure; the
/// rest go to spot with terminal cost a_l.
struct LbaResult {
  std::vector<bool> on_contract;        // S as a membership mask
  std::vector<FeasibleSet> contracts;   // packing of S with at most B contracts
  std::vector<double> alpha;            // alpha_l = r_l(a_l)
  std::vector<PolicySummary> policies;  // best responses at w = a_l, every load
  double expected_cost = 0.0;           // sum of alpha over loads outside S

  std::vector<LoadId> contract_set() const;
};

LbaResult run_lba(const Instance& inst, ExecMode exec = ExecMode::serial);

}  // namespace fcoord
