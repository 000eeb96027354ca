#include <algorithm>
#include <cmath>
#include <string>

#include "freightcoord/error.hpp"
#include "freightcoord/lp.hpp"

namespace fcoord {

void LinearProgram::validate() const {
  const std::size_t n = objective.size();
  if (!lower.empty() && lower.size() != n) throw InputError("lower bound vector has wrong length");
  if (!upper.empty() && upper.size() != n) throw InputError("upper bound vector has wrong length");
  for (double c : objective)
    if (!std::isfinite(c)) throw InputError("non-finite objective coefficient");
  for (std::size_t j = 0; j < n; ++j) {
    const double lo = lower.empty() ? 0.0 : lower[j];
    const double hi = upper.empty() ? kInf : upper[j];
    if (!std::isfinite(lo)) throw InputError("lower bounds must be finite");
    if (std::isnan(hi) || hi < lo) throw InputError("upper bound below lower bound");
  }
  for (const auto& row : rows) {
    if (!std::isfinite(row.rhs)) throw InputError("non-finite right-hand side");
    for (const auto& [var, coef] : row.terms) {
      if (var >= n) throw InputError("constraint references unknown variable");
      if (!std::isfinite(coef)) throw InputError("non-finite constraint coefficient");
    }
  }
}

namespace kernels {

void pivot_reference(TableauView t, std::size_t r, std::size_t s, double eps) {
  double* a = t.data + r * t.stride;
  const double inv = 1.0 / a[s];
  for (std::size_t i = 0; i < t.rows; ++i) {
    double* b = t.data + i * t.stride;
    if (i == r || std::fabs(b[s]) <= eps) continue;
    const double factor = b[s] * inv;
    for (std::size_t j = 0; j < t.cols; ++j) b[j] -= a[j] * factor;
    b[s] = a[s] * factor;
  }
  for (std::size_t j = 0; j < t.cols; ++j)
    if (j != s) a[j] *= inv;
  for (std::size_t i = 0; i < t.rows; ++i)
    if (i != r) t.data[i * t.stride + s] *= -inv;
  a[s] = inv;
}

void pivot_sparse(TableauView t, std::size_t r, std::size_t s, double eps, ExecMode exec,
                  std::vector<std::size_t>& scratch) {
  double* a = t.data + r * t.stride;
  const double inv = 1.0 / a[s];
  // Columns where the pivot row is zero leave every other row unchanged.
  scratch.clear();
  for (std::size_t j = 0; j < t.cols; ++j)
    if (j != s && a[j] != 0.0) scratch.push_back(j);
  const std::size_t* nz = scratch.data();
  const std::size_t nnz = scratch.size();

  auto eliminate = [&](std::size_t i) {
    double* b = t.data + i * t.stride;
    if (i == r || std::fabs(b[s]) <= eps) return;
    const double factor = b[s] * inv;
    for (std::size_t k = 0; k < nnz; ++k) b[nz[k]] -= a[nz[k]] * factor;
    b[s] = a[s] * factor;
  };
  if (exec == ExecMode::parallel && t.rows * nnz > 20000) {
    for_each_index(ExecMode::parallel, t.rows, eliminate);
  } else {
    for (std::size_t i = 0; i < t.rows; ++i) eliminate(i);
  }
  for (std::size_t k = 0; k < nnz; ++k) a[nz[k]] *= inv;
  for (std::size_t i = 0; i < t.rows; ++i)
    if (i != r) t.data[i * t.stride + s] *= -inv;
  a[s] = inv;
}

}  // namespace kernels

namespace {

constexpr double kEps = 1e-9;

// Where an internal "<=" row came from.
struct RowOrigin {
  enum Kind { user, upper_bound } kind;
  std::size_t index;  // user row or variable
  double sign;        // internal row = sign * user row
};

}  // namespace

// Internal form: max cbar^T x' s.t. Abar x' <= bbar, x' >= 0 with x = lower + x'.
// Dictionary layout follows the classic single-artificial two-phase method:
// columns [0, n) nonbasic variables, n the artificial, n+1 the right-hand
// side; rows [0, m) constraints, m the objective, m+1 the phase-one objective.
struct SimplexSolver::Impl {
  SimplexOptions options;
  Sense sense;
  std::size_t n_user = 0;
  std::size_t user_rows = 0;
  std::vector<double> lower;
  std::vector<RowOrigin> origins;
  std::size_t m = 0, n = 0;
  std::vector<double> D;
  std::vector<long> basic, nonbasic;
  std::vector<std::size_t> scratch;
  std::size_t pivots = 0;
  bool feasible_basis = false;

  double& at(std::size_t i, std::size_t j) { return D[i * (n + 2) + j]; }
  double at(std::size_t i, std::size_t j) const { return D[i * (n + 2) + j]; }

  void pivot(std::size_t r, std::size_t s) {
    kernels::pivot_sparse({D.data(), m + 2, n + 2, n + 2}, r, s, kEps, options.exec, scratch);
    std::swap(basic[r], nonbasic[s]);
    if (++pivots > options.max_pivots) throw SolverError("simplex pivot limit exceeded");
  }

  bool better_entering(std::size_t row, std::size_t j, long s) const {
    if (s < 0) return true;
    const auto cur = static_cast<std::size_t>(s);
    if (options.rule == PivotRule::bland) return nonbasic[j] < nonbasic[cur];
    const double dj = at(row, j), ds = at(row, cur);
    return dj < ds || (dj == ds && nonbasic[j] < nonbasic[cur]);
  }

  // Returns false when the objective of row `obj` is unbounded.
  bool run(int phase) {
    const std::size_t obj = phase == 1 ? m : m + 1;
    for (;;) {
      long s = -1;
      for (std::size_t j = 0; j <= n; ++j) {
        if (nonbasic[j] == -phase) continue;
        if (at(obj, j) < -kEps && better_entering(obj, j, s)) s = static_cast<long>(j);
      }
      if (s < 0) return true;
      const auto col = static_cast<std::size_t>(s);
      long r = -1;
      double best = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        const double piv = at(i, col);
        if (piv <= kEps) continue;
        const double ratio = at(i, n + 1) / piv;
        if (r < 0 || ratio < best || (ratio == best && basic[i] < basic[static_cast<std::size_t>(r)])) {
          r = static_cast<long>(i);
          best = ratio;
        }
      }
      if (r < 0) return false;
      pivot(static_cast<std::size_t>(r), col);
    }
  }

  void load_objective(std::span<const double> user_objective) {
    // Internal costs over variables [0, n); slacks cost nothing.
    std::vector<double> cost(n, 0.0);
    const double sign = sense == Sense::maximize ? 1.0 : -1.0;
    for (std::size_t j = 0; j < n_user; ++j) cost[j] = sign * user_objective[j];
    auto cost_of = [&](long var) { return var >= 0 && static_cast<std::size_t>(var) < n ? cost[var] : 0.0; };
    for (std::size_t j = 0; j <= n + 1; ++j) {
      double v = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        const double cb = cost_of(basic[i]);
        if (cb != 0.0) v += cb * at(i, j);
      }
      if (j <= n) v -= cost_of(nonbasic[j]);
      at(m, j) = v;
    }
  }

  void build(const LinearProgram& lp) {
    lp.validate();
    sense = lp.sense;
    n_user = lp.num_vars();
    user_rows = lp.rows.size();
    lower = lp.lower.empty() ? std::vector<double>(n_user, 0.0) : lp.lower;

    std::vector<std::vector<std::pair<std::size_t, double>>> rows;
    std::vector<double> rhs;
    auto add = [&](const std::vector<std::pair<std::size_t, double>>& terms, double b, double sign, RowOrigin origin) {
      std::vector<std::pair<std::size_t, double>> t;
      t.reserve(terms.size());
      double shifted = b;
      for (const auto& [var, coef] : terms) {
        shifted -= coef * lower[var];
        t.emplace_back(var, sign * coef);
      }
      rows.push_back(std::move(t));
      rhs.push_back(sign * shifted);
      origin.sign = sign;
      origins.push_back(origin);
    };
    for (std::size_t i = 0; i < lp.rows.size(); ++i) {
      const auto& row = lp.rows[i];
      if (row.relation != Relation::greater_equal) add(row.terms, row.rhs, 1.0, {RowOrigin::user, i, 1.0});
      if (row.relation != Relation::less_equal) add(row.terms, row.rhs, -1.0, {RowOrigin::user, i, -1.0});
    }
    if (!lp.upper.empty()) {
      for (std::size_t j = 0; j < n_user; ++j) {
        if (std::isinf(lp.upper[j])) continue;
        origins.push_back({RowOrigin::upper_bound, j, 1.0});
        rows.push_back({{j, 1.0}});
        rhs.push_back(lp.upper[j] - lower[j]);
      }
    }

    m = rows.size();
    n = n_user;
    D.assign((m + 2) * (n + 2), 0.0);
    basic.resize(m);
    nonbasic.resize(n + 1);
    for (std::size_t i = 0; i < m; ++i) {
      for (const auto& [var, coef] : rows[i]) at(i, var) += coef;
      basic[i] = static_cast<long>(n + i);
      at(i, n) = -1.0;
      at(i, n + 1) = rhs[i];
    }
    for (std::size_t j = 0; j < n; ++j) nonbasic[j] = static_cast<long>(j);
    nonbasic[n] = -1;
    at(m + 1, n) = 1.0;
    load_objective(lp.objective);
  }

  void phase_one() {
    if (m == 0) {
      feasible_basis = true;
      return;
    }
    std::size_t r = 0;
    for (std::size_t i = 1; i < m; ++i)
      if (at(i, n + 1) < at(r, n + 1)) r = i;
    if (at(r, n + 1) < -kEps) {
      pivot(r, n);
      if (!run(2) || at(m + 1, n + 1) < -kEps) throw SolverError("linear program is infeasible");
      for (std::size_t i = 0; i < m; ++i) {
        if (basic[i] != -1) continue;
        std::size_t s = 0;
        for (std::size_t j = 1; j <= n; ++j) {
          const double dj = at(i, j), ds = at(i, s);
          if (dj < ds || (dj == ds && nonbasic[j] < nonbasic[s])) s = j;
        }
        pivot(i, s);
      }
    }
    feasible_basis = true;
  }

  LpSolution extract() const {
    LpSolution sol;
    sol.x = lower;
    for (std::size_t i = 0; i < m; ++i) {
      const long v = basic[i];
      if (v >= 0 && static_cast<std::size_t>(v) < n_user) sol.x[v] += at(i, n + 1);
    }
    // Objective recomputed from x so it carries the shift by the lower bounds.
    sol.objective = 0.0;
    sol.pivots = pivots;
    sol.row_duals.assign(user_rows, 0.0);
    const double sign = sense == Sense::maximize ? 1.0 : -1.0;
    for (std::size_t j = 0; j <= n; ++j) {
      const long v = nonbasic[j];
      if (v < static_cast<long>(n)) continue;
      const RowOrigin& origin = origins[static_cast<std::size_t>(v) - n];
      if (origin.kind != RowOrigin::user) continue;
      // d(internal objective)/d(internal rhs) = D[m][j]; map back to the user row.
      sol.row_duals[origin.index] += sign * origin.sign * at(m, j);
    }
    return sol;
  }

  LpSolution finish(std::span<const double> user_objective) {
    if (!run(1)) throw SolverError("linear program is unbounded");
    LpSolution sol = extract();
    double value = 0.0;
    for (std::size_t j = 0; j < n_user; ++j) value += user_objective[j] * sol.x[j];
    sol.objective = value;
    return sol;
  }
};

SimplexSolver::SimplexSolver(const LinearProgram& lp, SimplexOptions options) : impl_(std::make_unique<Impl>()) {
  impl_->options = options;
  impl_->build(lp);
  objective_.assign(lp.objective.begin(), lp.objective.end());
}

SimplexSolver::~SimplexSolver() = default;
SimplexSolver::SimplexSolver(SimplexSolver&&) noexcept = default;
SimplexSolver& SimplexSolver::operator=(SimplexSolver&&) noexcept = default;

LpSolution SimplexSolver::solve() {
  if (!impl_->feasible_basis) impl_->phase_one();
  return impl_->finish(objective_);
}

LpSolution SimplexSolver::resolve_with_objective(std::span<const double> objective) {
  if (objective.size() != impl_->n_user) throw InputError("objective has wrong length");
  for (double c : objective)
    if (!std::isfinite(c)) throw InputError("non-finite objective coefficient");
  if (!impl_->feasible_basis) impl_->phase_one();
  objective_.assign(objective.begin(), objective.end());
  impl_->load_objective(objective_);
  return impl_->finish(objective_);
}

LpSolution solve_lp(const LinearProgram& lp, SimplexOptions options) { return SimplexSolver(lp, options).solve(); }

}  // namespace fcoord
