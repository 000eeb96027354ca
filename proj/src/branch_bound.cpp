#include "freightcoord/branch_bound.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <sstream>

#include "freightcoord/error.hpp"

namespace fcoord {

namespace {

// Covering program over the generating sets restricted to supp(X):
//   min c^T (x, z)  s.t.  z_i + sum_{A ni i} x_A >= X_i,  [sum x_A <= B],
// with integer x. z only exists in the assignment variant.
struct CoveringProgram {
  std::vector<std::size_t> loads;  // support of X
  std::vector<FeasibleSet> sets;   // projected onto the support, deduplicated
  std::vector<int> demand;         // X over `loads`
  std::vector<double> cost;        // per load in `loads`; empty = pack-count variant
  int capacity = -1;

  std::size_t num_sets() const { return sets.size(); }
};

CoveringProgram build_program(const ContractFamily& family, std::span<const int> x) {
  CoveringProgram prog;
  std::vector<long> position(x.size(), -1);
  for (std::size_t l = 0; l < x.size(); ++l) {
    if (x[l] < 0) throw InputError("realization must be nonnegative");
    if (x[l] > 0) {
      position[l] = static_cast<long>(prog.loads.size());
      prog.loads.push_back(l);
      prog.demand.push_back(x[l]);
    }
  }
  std::set<FeasibleSet> unique;
  for (const auto& set : family.feasible_sets()) {
    FeasibleSet projected;
    for (LoadId id : set)
      if (id.index < x.size() && position[id.index] >= 0) projected.push_back(id);
    if (!projected.empty()) unique.insert(std::move(projected));
  }
  prog.sets.assign(unique.begin(), unique.end());
  return prog;
}

struct Node {
  double bound;
  std::size_t order;
  std::vector<double> lower, upper;  // over contract variables
  bool operator>(const Node& o) const { return bound > o.bound || (bound == o.bound && order > o.order); }
};

struct Incumbent {
  double value;
  std::vector<long long> counts;
};

class CoveringSolver {
 public:
  CoveringSolver(CoveringProgram prog, const BranchBoundOptions& options) : p_(std::move(prog)), opt_(options) {
    index_.resize(p_.loads.size());
    std::map<std::size_t, std::size_t> pos;
    for (std::size_t k = 0; k < p_.loads.size(); ++k) pos[p_.loads[k]] = k;
    for (std::size_t s = 0; s < p_.num_sets(); ++s)
      for (LoadId id : p_.sets[s]) index_[pos.at(id.index)].push_back(s);
    member_.resize(p_.num_sets());
    for (std::size_t s = 0; s < p_.num_sets(); ++s)
      for (LoadId id : p_.sets[s]) member_[s].push_back(pos.at(id.index));
  }

  bool assignment() const { return !p_.cost.empty(); }

  double evaluate(const std::vector<long long>& counts) const {
    if (!assignment()) {
      double v = 0.0;
      for (auto c : counts) v += static_cast<double>(c);
      return v;
    }
    double v = 0.0;
    for (std::size_t k = 0; k < p_.loads.size(); ++k) {
      long long covered = 0;
      for (std::size_t s : index_[k]) covered += counts[s];
      v += p_.cost[k] * static_cast<double>(std::max<long long>(0, p_.demand[k] - covered));
    }
    return v;
  }

  bool feasible(const std::vector<long long>& counts) const {
    if (assignment()) {
      long long total = 0;
      for (auto c : counts) total += c;
      return total <= p_.capacity;
    }
    for (std::size_t k = 0; k < p_.loads.size(); ++k) {
      long long covered = 0;
      for (std::size_t s : index_[k]) covered += counts[s];
      if (covered < p_.demand[k]) return false;
    }
    return true;
  }

  void offer(std::vector<long long> counts) {
    if (!feasible(counts)) return;
    const double v = evaluate(counts);
    if (v < best_.value - 1e-9) best_ = {v, std::move(counts)};
  }

  std::optional<LpSolution> relax(const Node& node) const {
    const std::size_t n_sets = p_.num_sets();
    const std::size_t n_z = assignment() ? p_.loads.size() : 0;
    LinearProgram lp;
    lp.sense = Sense::minimize;
    lp.objective.assign(n_sets + n_z, 0.0);
    if (assignment()) {
      for (std::size_t k = 0; k < n_z; ++k) lp.objective[n_sets + k] = p_.cost[k];
    } else {
      std::fill(lp.objective.begin(), lp.objective.begin() + static_cast<long>(n_sets), 1.0);
    }
    lp.lower.assign(n_sets + n_z, 0.0);
    lp.upper.assign(n_sets + n_z, kInf);
    for (std::size_t s = 0; s < n_sets; ++s) {
      lp.lower[s] = node.lower[s];
      lp.upper[s] = node.upper[s];
    }
    for (std::size_t k = 0; k < p_.loads.size(); ++k) {
      LinearConstraint row;
      row.relation = Relation::greater_equal;
      row.rhs = p_.demand[k];
      for (std::size_t s : index_[k]) row.terms.emplace_back(s, 1.0);
      if (assignment()) row.terms.emplace_back(n_sets + k, 1.0);
      lp.rows.push_back(std::move(row));
    }
    if (assignment()) {
      LinearConstraint cap;
      cap.relation = Relation::less_equal;
      cap.rhs = p_.capacity;
      for (std::size_t s = 0; s < n_sets; ++s) cap.terms.emplace_back(s, 1.0);
      lp.rows.push_back(std::move(cap));
    }
    try {
      return solve_lp(lp, opt_.simplex);
    } catch (const SolverError&) {
      return std::nullopt;
    }
  }

  bool prunable(double bound) const {
    if (!assignment()) return std::ceil(bound - 1e-7) >= best_.value - 0.5;
    return bound >= best_.value - 1e-9 * std::max(1.0, std::fabs(best_.value));
  }

  Incumbent run() {
    const std::size_t n_sets = p_.num_sets();
    // Starting incumbent: everything to the alternate channel, or one
    // contract per copy.
    std::vector<long long> start(n_sets, 0);
    if (assignment()) {
      best_ = {evaluate(start), start};
    } else {
      best_ = {kInf, {}};
      for (std::size_t k = 0; k < p_.loads.size(); ++k) {
        if (index_[k].empty()) throw InputError("realization requires a load no feasible set covers");
        start[index_[k].front()] += p_.demand[k];
      }
      offer(start);
    }

    Node root;
    root.bound = -kInf;
    root.order = 0;
    root.lower.assign(n_sets, 0.0);
    root.upper.assign(n_sets, 0.0);
    for (std::size_t s = 0; s < n_sets; ++s) {
      int cap = 0;
      for (std::size_t k : member_[s]) cap = std::max(cap, p_.demand[k]);
      if (assignment()) cap = std::min(cap, p_.capacity);
      root.upper[s] = cap;
    }

    std::priority_queue<Node, std::vector<Node>, std::greater<>> open;
    open.push(std::move(root));
    std::size_t order = 1, nodes = 0;
    while (!open.empty()) {
      Node node = open.top();
      open.pop();
      if (node.bound > -kInf && prunable(node.bound)) continue;
      if (++nodes > opt_.node_budget) {
        std::ostringstream msg;
        msg << "branch-and-bound node budget " << opt_.node_budget << " exhausted; best bound "
            << node.bound << ", incumbent " << best_.value;
        throw CapabilityError(msg.str());
      }
      const auto sol = relax(node);
      if (!sol) continue;
      if (prunable(sol->objective)) continue;

      std::vector<long long> rounded(n_sets), down(n_sets), up(n_sets);
      long branch = -1;
      double best_dist = 1.0;
      for (std::size_t s = 0; s < n_sets; ++s) {
        const double v = sol->x[s];
        const double r = std::round(v);
        rounded[s] = static_cast<long long>(r);
        down[s] = static_cast<long long>(std::floor(v + 1e-9));
        up[s] = static_cast<long long>(std::ceil(v - 1e-9));
        const double dist = std::fabs(v - std::floor(v) - 0.5);
        if (std::fabs(v - r) > 1e-7 && dist < best_dist) {
          best_dist = dist;
          branch = static_cast<long>(s);
        }
      }
      if (branch < 0) {
        offer(rounded);
        continue;
      }
      offer(assignment() ? down : up);

      const auto b = static_cast<std::size_t>(branch);
      Node left = node, right = std::move(node);
      left.bound = right.bound = sol->objective;
      left.upper[b] = std::floor(sol->x[b]);
      right.lower[b] = std::ceil(sol->x[b]);
      left.order = order++;
      right.order = order++;
      open.push(std::move(left));
      open.push(std::move(right));
    }
    return best_;
  }

  const CoveringProgram& program() const { return p_; }

 private:
  CoveringProgram p_;
  BranchBoundOptions opt_;
  std::vector<std::vector<std::size_t>> index_;   // load position -> sets containing it
  std::vector<std::vector<std::size_t>> member_;  // set -> load positions
  Incumbent best_{kInf, {}};
};

}  // namespace

long long generic_pack_count(const ContractFamily& family, std::span<const int> x, const BranchBoundOptions& options) {
  if (x.size() != family.num_loads()) throw InputError("realization length does not match the family");
  CoveringProgram prog = build_program(family, x);
  if (prog.loads.empty()) return 0;
  CoveringSolver solver(std::move(prog), options);
  return static_cast<long long>(std::llround(solver.run().value));
}

AssignmentSolution generic_assignment_cost(const ContractFamily& family, std::span<const int> x, int capacity,
                                           std::span<const double> alternate_costs,
                                           const BranchBoundOptions& options) {
  if (x.size() != family.num_loads() || alternate_costs.size() != x.size())
    throw InputError("realization and costs must match the family size");
  if (capacity < 0) throw InputError("capacity must be nonnegative");
  CoveringProgram prog = build_program(family, x);
  AssignmentSolution out;
  out.alternate.assign(x.begin(), x.end());
  if (prog.loads.empty()) return out;
  for (std::size_t l : prog.loads) prog.cost.push_back(alternate_costs[l]);
  prog.capacity = capacity;
  CoveringSolver solver(std::move(prog), options);
  const Incumbent best = solver.run();
  const CoveringProgram& p = solver.program();
  for (std::size_t s = 0; s < p.num_sets(); ++s) {
    for (long long c = 0; c < best.counts[s]; ++c) {
      out.contracts.push_back(p.sets[s]);
      for (LoadId id : p.sets[s])
        if (out.alternate[id.index] > 0) --out.alternate[id.index];
    }
  }
  out.cost = 0.0;
  for (std::size_t l = 0; l < x.size(); ++l) out.cost += alternate_costs[l] * out.alternate[l];
  return out;
}

}  // namespace fcoord
