#include "freightcoord/lba.hpp"

#include <algorithm>

namespace fcoord {

std::vector<LoadId> LbaResult::contract_set() const {
  std::vector<LoadId> out;
  for (std::size_t l = 0; l < on_contract.size(); ++l)
    if (on_contract[l]) out.push_back(LoadId{l});
  return out;
}

LbaResult run_lba(const Instance& inst, ExecMode exec) {
  const std::size_t L = inst.num_loads();
  LbaResult out;
  out.policies.resize(L);
  const auto& a = inst.alternate_costs();
  for_each_index(exec, L, [&](std::size_t l) { out.policies[l] = inst.oracle(l).best_response(a[l]); });
  out.alpha.resize(L);
  for (std::size_t l = 0; l < L; ++l) out.alpha[l] = out.policies[l].total;

  // Selection program: C(1) with alpha in place of a.
  const std::vector<int> ones(L, 1);
  AssignmentSolution sel = assignment_cost(inst.family(), ones, inst.capacity(), out.alpha);
  out.contracts = std::move(sel.contracts);
  out.on_contract.assign(L, false);
  for (const auto& c : out.contracts)
    for (LoadId id : c) out.on_contract[id.index] = true;
  out.expected_cost = 0.0;
  for (std::size_t l = 0; l < L; ++l)
    if (!out.on_contract[l]) out.expected_cost += out.alpha[l];
  return out;
}

}  // namespace fcoord
