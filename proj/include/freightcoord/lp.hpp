#pragma once

#include <cstddef>
#include <limits>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "freightcoord/contracts.hpp"
#include "freightcoord/core.hpp"
#include "freightcoord/parallel.hpp"

namespace fcoord {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Sense { minimize, maximize };
enum class Relation { less_equal, greater_equal, equal };

struct LinearConstraint {
  std::vector<std::pair<std::size_t, double>> terms;  // (variable, coefficient)
  Relation relation = Relation::less_equal;
  double rhs = 0.0;
};

/// min/max c^T x subject to rows and lower <= x <= upper. Lower bounds must
/// be finite; upper bounds may be +inf.
struct LinearProgram {
  Sense sense = Sense::minimize;
  std::vector<double> objective;
  std::vector<LinearConstraint> rows;
  std::vector<double> lower;  // empty = all zero
  std::vector<double> upper;  // empty = all +inf

  std::size_t num_vars() const { return objective.size(); }
  /// Throws InputError on inconsistent dimensions or non-finite data.
  void validate() const;
};

enum class PivotRule {
  bland,    // lowest-index improving column, lowest-index leaving row
  dantzig,  // most improving column, ties by index
};

struct SimplexOptions {
  PivotRule rule = PivotRule::bland;
  ExecMode exec = ExecMode::serial;
  std::size_t max_pivots = 5'000'000;
};

struct LpSolution {
  std::vector<double> x;
  double objective = 0.0;
  /// One multiplier per input row, sign convention of the Lagrangian
  /// c^T x - y^T (A x - b) for minimisation (so y >= 0 on >= rows);
  /// equivalently d(objective)/d(rhs) under either sense.
  std::vector<double> row_duals;
  std::size_t pivots = 0;
};

/// Dictionary-form simplex (two phase, single artificial) over a dense
/// tableau. Keeps its basis, so a new objective can be re-optimised from the
/// previous optimal vertex.
class SimplexSolver {
 public:
  SimplexSolver(const LinearProgram& lp, SimplexOptions options = {});
  ~SimplexSolver();
  SimplexSolver(SimplexSolver&&) noexcept;
  SimplexSolver& operator=(SimplexSolver&&) noexcept;

  /// Throws SolverError if infeasible or unbounded.
  LpSolution solve();
  /// Replaces the objective (same sense) and re-optimises from the current basis.
  LpSolution resolve_with_objective(std::span<const double> objective);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::vector<double> objective_;
};

LpSolution solve_lp(const LinearProgram& lp, SimplexOptions options = {});

namespace kernels {

/// Dense row-major dictionary with `stride` columns per row.
struct TableauView {
  double* data;
  std::size_t rows;
  std::size_t cols;
  std::size_t stride;
};

/// Reference pivot on (r, s): every row, every column, in order.
void pivot_reference(TableauView t, std::size_t r, std::size_t s, double eps);
/// Pivot skipping zero rows/columns of the pivot cross; rows run on OpenMP
/// threads when `exec` is parallel. Bitwise-identical to pivot_reference.
void pivot_sparse(TableauView t, std::size_t r, std::size_t s, double eps, ExecMode exec,
                  std::vector<std::size_t>& scratch);

}  // namespace kernels

/// Optimal vertex of max lambda^T q - mu B over the dual polytope.
struct DualLpSolution {
  ShadowPrices prices;
  double objective = 0.0;
  bool vertex = true;
  std::size_t cut_rounds = 0;
};

struct FractionalPrimal {
  std::vector<double> z;                 // alternate-channel fraction per load
  std::vector<FeasibleSet> sets;         // columns used
  std::vector<double> x;                 // contract fraction per column
  double objective = 0.0;
};

/// max lambda^T q - mu B  s.t.  sum_{l in A} lambda_l <= mu (A in family),
/// 0 <= lambda <= a, mu >= 0. Enumerates constraints when the family is
/// enumerable, otherwise adds violated sets from the separation oracle.
DualLpSolution solve_dual_lp(const Instance& inst, std::span<const double> q, SimplexOptions options = {});

/// min a^T z  s.t.  z_i + sum_{A ni i} x_A >= q_i, sum x_A <= B, z, x >= 0.
/// Non-enumerable families use column generation.
FractionalPrimal solve_fractional_primal(const Instance& inst, std::span<const double> q,
                                         SimplexOptions options = {});

/// Reusable dual-LP solver for a fixed instance whose objective changes
/// between calls (the Frank-Wolfe loop). Warm-starts from the previous basis
/// and keeps every generated cut.
class DualLpSession {
 public:
  explicit DualLpSession(const Instance& inst, SimplexOptions options = {});
  ~DualLpSession();
  DualLpSession(DualLpSession&&) noexcept;
  DualLpSession& operator=(DualLpSession&&) noexcept;

  DualLpSolution solve(std::span<const double> q);

  std::size_t num_rows() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace fcoord
