#include <algorithm>
#include <cmath>
#include <optional>
#include <set>

#include "freightcoord/error.hpp"
#include "freightcoord/lp.hpp"

namespace fcoord {

namespace {

void check_profile(const Instance& inst, std::span<const double> q) {
  if (q.size() != inst.num_loads()) throw InputError("residual profile length does not match the instance");
  for (double v : q)
    if (!(v >= 0.0 && v <= 1.0)) throw InputError("residual profile entries must lie in [0, 1]");
}

// Variables: lambda_0..lambda_{L-1}, then mu.
LinearProgram dual_program(const Instance& inst, std::span<const double> q, const std::vector<FeasibleSet>& sets) {
  const std::size_t L = inst.num_loads();
  LinearProgram lp;
  lp.sense = Sense::maximize;
  lp.objective.assign(q.begin(), q.end());
  lp.objective.push_back(-static_cast<double>(inst.capacity()));
  lp.upper.assign(inst.alternate_costs().begin(), inst.alternate_costs().end());
  lp.upper.push_back(kInf);
  for (std::size_t l = 0; l < L; ++l) lp.upper[l] = std::max(0.0, lp.upper[l]);
  lp.rows.reserve(sets.size());
  for (const auto& set : sets) {
    LinearConstraint row;
    row.relation = Relation::less_equal;
    row.rhs = 0.0;
    for (LoadId id : set) row.terms.emplace_back(id.index, 1.0);
    row.terms.emplace_back(L, -1.0);
    lp.rows.push_back(std::move(row));
  }
  return lp;
}

std::vector<FeasibleSet> singleton_sets(std::size_t L) {
  std::vector<FeasibleSet> sets(L);
  for (std::size_t l = 0; l < L; ++l) sets[l] = {LoadId{l}};
  return sets;
}

DualLpSolution to_dual(const LpSolution& sol, std::size_t L, std::size_t rounds) {
  DualLpSolution out;
  out.prices.lambda.assign(sol.x.begin(), sol.x.begin() + static_cast<long>(L));
  out.prices.mu = sol.x[L];
  // Clip round-off so downstream feasibility checks see exact bounds.
  for (double& v : out.prices.lambda) v = std::max(0.0, v);
  out.prices.mu = std::max(0.0, out.prices.mu);
  out.objective = sol.objective;
  out.vertex = true;
  out.cut_rounds = rounds;
  return out;
}

}  // namespace

struct DualLpSession::Impl {
  const Instance* inst;
  SimplexOptions options;
  std::vector<FeasibleSet> sets;
  std::set<FeasibleSet> known;
  std::optional<SimplexSolver> solver;  // persistent for enumerable families
  bool cutting = false;

  Impl(const Instance& instance, SimplexOptions opts) : inst(&instance), options(opts) {
    const auto& family = instance.family();
    cutting = !family.enumerable();
    sets = cutting ? singleton_sets(instance.num_loads()) : family.feasible_sets();
    known.insert(sets.begin(), sets.end());
  }

  DualLpSolution solve(std::span<const double> q) {
    check_profile(*inst, q);
    const std::size_t L = inst->num_loads();
    if (!cutting) {
      if (!solver) {
        solver.emplace(dual_program(*inst, q, sets), options);
        return to_dual(solver->solve(), L, 0);
      }
      std::vector<double> c(q.begin(), q.end());
      c.push_back(-static_cast<double>(inst->capacity()));
      return to_dual(solver->resolve_with_objective(c), L, 0);
    }

    const std::size_t cap = 10 * L;
    for (std::size_t round = 0;; ++round) {
      LpSolution sol = solve_lp(dual_program(*inst, q, sets), options);
      DualLpSolution cand = to_dual(sol, L, round);
      auto cut = separation_oracle(inst->family(), cand.prices);
      if (!cut) return cand;
      if (round >= cap) throw SolverError("cutting-plane loop exceeded " + std::to_string(cap) + " rounds");
      if (!known.insert(cut->set).second)
        throw SolverError("separation returned a set that is already a constraint");
      sets.push_back(std::move(cut->set));
    }
  }
};

DualLpSession::DualLpSession(const Instance& inst, SimplexOptions options)
    : impl_(std::make_unique<Impl>(inst, options)) {}
DualLpSession::~DualLpSession() = default;
DualLpSession::DualLpSession(DualLpSession&&) noexcept = default;
DualLpSession& DualLpSession::operator=(DualLpSession&&) noexcept = default;

DualLpSolution DualLpSession::solve(std::span<const double> q) { return impl_->solve(q); }

std::size_t DualLpSession::num_rows() const { return impl_->sets.size(); }

DualLpSolution solve_dual_lp(const Instance& inst, std::span<const double> q, SimplexOptions options) {
  DualLpSession session(inst, options);
  return session.solve(q);
}

FractionalPrimal solve_fractional_primal(const Instance& inst, std::span<const double> q, SimplexOptions options) {
  check_profile(inst, q);
  const std::size_t L = inst.num_loads();
  const auto& family = inst.family();
  const auto& a = inst.alternate_costs();
  std::vector<FeasibleSet> columns = family.enumerable() ? family.feasible_sets() : singleton_sets(L);
  std::set<FeasibleSet> known(columns.begin(), columns.end());

  const std::size_t cap = 10 * L + 10;
  for (std::size_t round = 0;; ++round) {
    // Variables: z_0..z_{L-1}, then one x per column.
    LinearProgram lp;
    lp.sense = Sense::minimize;
    lp.objective.assign(L + columns.size(), 0.0);
    for (std::size_t l = 0; l < L; ++l) lp.objective[l] = a[l];
    std::vector<LinearConstraint> cover(L);
    for (std::size_t l = 0; l < L; ++l) {
      cover[l].relation = Relation::greater_equal;
      cover[l].rhs = q[l];
      cover[l].terms.emplace_back(l, 1.0);
    }
    LinearConstraint capacity;
    capacity.relation = Relation::less_equal;
    capacity.rhs = inst.capacity();
    for (std::size_t c = 0; c < columns.size(); ++c) {
      for (LoadId id : columns[c]) cover[id.index].terms.emplace_back(L + c, 1.0);
      capacity.terms.emplace_back(L + c, 1.0);
    }
    lp.rows = std::move(cover);
    lp.rows.push_back(std::move(capacity));
    LpSolution sol = solve_lp(lp, options);

    if (!family.enumerable()) {
      // Pricing step: the coverage duals are the load prices, the capacity
      // dual (negated) the contract price.
      ShadowPrices prices;
      prices.lambda.assign(sol.row_duals.begin(), sol.row_duals.begin() + static_cast<long>(L));
      for (double& v : prices.lambda) v = std::max(0.0, v);
      prices.mu = std::max(0.0, -sol.row_duals[L]);
      if (auto col = separation_oracle(family, prices)) {
        if (round >= cap) throw SolverError("column generation exceeded " + std::to_string(cap) + " rounds");
        if (!known.insert(col->set).second) throw SolverError("column generation repeated a column");
        columns.push_back(std::move(col->set));
        continue;
      }
    }

    FractionalPrimal out;
    out.z.assign(sol.x.begin(), sol.x.begin() + static_cast<long>(L));
    for (std::size_t c = 0; c < columns.size(); ++c) {
      const double v = sol.x[L + c];
      if (v > 1e-12) {
        out.sets.push_back(columns[c]);
        out.x.push_back(v);
      }
    }
    out.objective = sol.objective;
    return out;
  }
}

}  // namespace fcoord
