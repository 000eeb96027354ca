#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "freightcoord/core.hpp"

namespace fcoord {

struct WeightedSet {
  FeasibleSet set;
  double weight = 0.0;
};

/// Optimum of the contract-assignment integer program C(X).
struct AssignmentSolution {
  std::vector<FeasibleSet> contracts;  // multiset of feasible sets, size <= B
  std::vector<int> alternate;          // copies of each load sent to the alternate channel
  double cost = 0.0;                   // sum_l a_l * alternate_l
};

/// Value with a Monte Carlo standard error (zero when computed exactly).
struct Estimate {
  double value = 0.0;
  double stderr = 0.0;
  bool exact = true;
};

/// Downward-closed family of load subsets a single contract can execute.
///
/// Families are immutable; every query is a pure function and may be issued
/// concurrently.
class ContractFamily {
 public:
  virtual ~ContractFamily() = default;

  virtual std::size_t num_loads() const = 0;
  /// u, the largest cardinality of a feasible set.
  virtual std::size_t max_set_size() const = 0;
  virtual std::string kind() const = 0;

  /// True when the generating sets are polynomially many.
  virtual bool enumerable() const = 0;
  /// Generating sets whose downward closure is the family. Non-enumerable
  /// families enumerate their maximal sets and throw CapabilityError past `limit`.
  virtual std::vector<FeasibleSet> feasible_sets(std::size_t limit = 200000) const = 0;
  virtual bool is_feasible(std::span<const LoadId> set) const = 0;
  /// Feasible set maximising the summed weight of its members (ties -> first
  /// found in family order). Only positive weights are collected.
  virtual WeightedSet max_weight_set(std::span<const double> weights) const = 0;
  virtual bool covers(std::size_t load) const;

  /// B(X): fewest contracts covering every copy in X (no cap on contracts).
  virtual long long pack_count(std::span<const int> x) const;
  /// C(X) with at most `capacity` contracts.
  virtual AssignmentSolution assignment_cost(std::span<const int> x, int capacity,
                                             std::span<const double> alternate_costs) const;
  /// Exact multilinear extension B(d) when the family has a cheap closed form.
  virtual std::optional<double> fluid_pack_exact(std::span<const double> d) const;
};

/// A = all singletons; B(X) = sum X.
class LaneLevelFamily final : public ContractFamily {
 public:
  explicit LaneLevelFamily(std::size_t num_loads) : num_loads_(num_loads) {}

  std::size_t num_loads() const override { return num_loads_; }
  std::size_t max_set_size() const override { return 1; }
  std::string kind() const override { return "lane"; }
  bool enumerable() const override { return true; }
  std::vector<FeasibleSet> feasible_sets(std::size_t limit = 200000) const override;
  bool is_feasible(std::span<const LoadId> set) const override;
  WeightedSet max_weight_set(std::span<const double> weights) const override;
  long long pack_count(std::span<const int> x) const override;
  AssignmentSolution assignment_cost(std::span<const int> x, int capacity,
                                     std::span<const double> alternate_costs) const override;
  std::optional<double> fluid_pack_exact(std::span<const double> d) const override;

 private:
  std::size_t num_loads_;
};

/// Round-trip pairing: loads [0, n_left) start at O, loads
/// [n_left, n_left + n_right) start at D; an edge (i, j) joins left load i
/// with right load n_left + j. A = singletons plus edges.
class BipartiteFamily final : public ContractFamily {
 public:
  using Edge = std::pair<std::size_t, std::size_t>;  // side-local indices

  BipartiteFamily(std::size_t n_left, std::size_t n_right, std::vector<Edge> edges);

  std::size_t num_loads() const override { return n_left_ + n_right_; }
  std::size_t max_set_size() const override { return edges_.empty() ? 1 : 2; }
  std::string kind() const override { return "bipartite"; }
  bool enumerable() const override { return true; }
  std::vector<FeasibleSet> feasible_sets(std::size_t limit = 200000) const override;
  bool is_feasible(std::span<const LoadId> set) const override;
  WeightedSet max_weight_set(std::span<const double> weights) const override;
  /// sum X - (max matching with vertex capacities X).
  long long pack_count(std::span<const int> x) const override;
  /// Cardinality-capped max-value coverage as a min-cost flow.
  AssignmentSolution assignment_cost(std::span<const int> x, int capacity,
                                     std::span<const double> alternate_costs) const override;

  std::size_t n_left() const { return n_left_; }
  std::size_t n_right() const { return n_right_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::size_t right_load(std::size_t j) const { return n_left_ + j; }

 private:
  std::size_t n_left_, n_right_;
  std::vector<Edge> edges_;  // sorted, unique
  std::vector<std::vector<std::size_t>> adjacency_;  // left i -> right-local j
};

/// Contiguous active interval [first, last] of hourly slots, 1-based inclusive.
struct SlotInterval {
  int first = 1;
  int last = 1;
};

/// Colored interval contracts: same-color loads with pairwise-disjoint
/// active intervals. B(X) = sum_k max_t sum_{c(l)=k, t in I_l} X_l.
class RegionalFamily final : public ContractFamily {
 public:
  RegionalFamily(int num_slots, std::vector<int> colors, std::vector<SlotInterval> intervals);

  std::size_t num_loads() const override { return colors_.size(); }
  std::size_t max_set_size() const override { return max_set_size_; }
  std::string kind() const override { return "regional"; }
  bool enumerable() const override { return false; }
  std::vector<FeasibleSet> feasible_sets(std::size_t limit = 200000) const override;
  bool is_feasible(std::span<const LoadId> set) const override;
  /// Per-color weighted interval scheduling.
  WeightedSet max_weight_set(std::span<const double> weights) const override;
  long long pack_count(std::span<const int> x) const override;
  /// Per-color k-track interval selection as a min-cost flow on the slot line.
  AssignmentSolution assignment_cost(std::span<const int> x, int capacity,
                                     std::span<const double> alternate_costs) const override;
  /// Exact while every color has at most 20 fractional coordinates.
  std::optional<double> fluid_pack_exact(std::span<const double> d) const override;

  int num_slots() const { return num_slots_; }
  int num_colors() const { return num_colors_; }
  const std::vector<int>& colors() const { return colors_; }
  const std::vector<SlotInterval>& intervals() const { return intervals_; }

 private:
  bool overlaps(std::size_t a, std::size_t b) const;

  int num_slots_;
  int num_colors_;
  std::vector<int> colors_;
  std::vector<SlotInterval> intervals_;
  std::size_t max_set_size_;
};

/// Family given by an explicit list of generating sets; solved by the
/// generic branch-and-bound.
class ExplicitFamily final : public ContractFamily {
 public:
  ExplicitFamily(std::size_t num_loads, std::vector<FeasibleSet> sets);

  std::size_t num_loads() const override { return num_loads_; }
  std::size_t max_set_size() const override { return max_set_size_; }
  std::string kind() const override { return "explicit"; }
  bool enumerable() const override { return true; }
  std::vector<FeasibleSet> feasible_sets(std::size_t limit = 200000) const override;
  bool is_feasible(std::span<const LoadId> set) const override;
  WeightedSet max_weight_set(std::span<const double> weights) const override;
  bool covers(std::size_t load) const override;

 private:
  std::size_t num_loads_;
  std::vector<FeasibleSet> sets_;
  std::vector<bool> covered_;
  std::size_t max_set_size_;
};

struct ViolatedSet {
  FeasibleSet set;
  double weight = 0.0;  // sum of lambda over the set
};

/// Tolerance for declaring sum(lambda over A) > mu violated.
double separation_tolerance(double mu);

long long pack_count(const ContractFamily& family, std::span<const int> x);

/// Multilinear extension B(d) = E_{X~d}[B(X)]; exact when the family has a
/// closed form or d is integral, Monte Carlo over `n_samples` otherwise.
Estimate fluid_pack(const ContractFamily& family, std::span<const double> d, std::size_t n_samples,
                    std::uint64_t seed);

/// B(d) by enumerating the 2^k outcomes of the k fractional coordinates.
double fluid_pack_enumerate(const ContractFamily& family, std::span<const double> d, std::size_t max_fractional = 20);

AssignmentSolution assignment_cost(const ContractFamily& family, std::span<const int> x, int capacity,
                                   std::span<const double> alternate_costs);

/// Most violated set of lambda^T 1_A <= mu, if any.
std::optional<ViolatedSet> separation_oracle(const ContractFamily& family, const ShadowPrices& prices);

/// Erdos-Renyi bipartite graph with independent edges of probability p.
BipartiteFamily gen_er_bipartite(std::size_t n_left, std::size_t n_right, double p, std::uint64_t seed);

/// B(X/2) - B(X)/2, exact when possible.
Estimate substitutability_gap(const ContractFamily& family, std::span<const int> x, std::size_t n_samples = 20000,
                              std::uint64_t seed = 0x5eed);

/// Prop-style bound sqrt(L K ln T / 2) for colored interval contracts.
double regional_gap_bound(const RegionalFamily& family);

/// Edge list: one "left_index right_index" pair per line; '#' starts a comment.
std::vector<BipartiteFamily::Edge> read_edge_list(std::istream& in);
void write_edge_list(std::ostream& out, std::span<const BipartiteFamily::Edge> edges);

/// Checks AssignmentSolution invariants against X, returning a message on failure.
std::optional<std::string> check_assignment(const ContractFamily& family, std::span<const int> x, int capacity,
                                            std::span<const double> alternate_costs,
                                            const AssignmentSolution& solution);

}  // namespace fcoord
