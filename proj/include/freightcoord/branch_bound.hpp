#pragma once

// Family-agnostic solvers for the covering programs behind B(X) and C(X).
// They only use ContractFamily::feasible_sets, so they serve as the reference
// the specialised family solvers are tested against.

#include <cstddef>
#include <span>

#include "freightcoord/contracts.hpp"
#include "freightcoord/lp.hpp"

namespace fcoord {

struct BranchBoundOptions {
  std::size_t node_budget = 1'000'000;
  SimplexOptions simplex{};
};

/// Best-first branch-and-bound on the LP relaxation, branching on the most
/// fractional contract count. Throws CapabilityError (with the best bound in
/// the message) when the node budget runs out.
long long generic_pack_count(const ContractFamily& family, std::span<const int> x,
                             const BranchBoundOptions& options = {});

AssignmentSolution generic_assignment_cost(const ContractFamily& family, std::span<const int> x, int capacity,
                                           std::span<const double> alternate_costs,
                                           const BranchBoundOptions& options = {});

}  // namespace fcoord
