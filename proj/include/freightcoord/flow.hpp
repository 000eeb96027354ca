#pragma once

// Network-flow kernels backing the specialised contract families.

#include <cstddef>
#include <limits>
#include <vector>

namespace fcoord::flow {

inline constexpr long long kInfiniteCapacity = std::numeric_limits<long long>::max() / 4;

/// Dinic max-flow on integer capacities.
class MaxFlow {
 public:
  explicit MaxFlow(std::size_t num_nodes);

  std::size_t add_arc(std::size_t from, std::size_t to, long long capacity);
  long long solve(std::size_t source, std::size_t sink);
  long long flow(std::size_t arc) const;

 private:
  struct Arc {
    std::size_t to;
    long long residual;
    long long capacity;
  };
  bool build_levels(std::size_t source, std::size_t sink);
  long long push(std::size_t node, std::size_t sink, long long limit);

  std::vector<Arc> arcs_;
  std::vector<std::vector<std::size_t>> out_;
  std::vector<int> level_;
  std::vector<std::size_t> cursor_;
};

/// Successive-shortest-path min-cost flow. The input network must contain no
/// negative-cost cycle; costs may be negative. Augmentation stops once the
/// cheapest path has non-negative cost or `max_flow` units have been sent, so
/// solve() returns the minimum-cost flow of value at most `max_flow`.
class MinCostFlow {
 public:
  explicit MinCostFlow(std::size_t num_nodes);

  std::size_t add_arc(std::size_t from, std::size_t to, long long capacity, double cost);

  struct Result {
    long long flow = 0;
    double cost = 0.0;
  };
  Result solve(std::size_t source, std::size_t sink, long long max_flow);
  long long flow(std::size_t arc) const;

 private:
  struct Arc {
    std::size_t from, to;
    long long residual;
    long long capacity;
    double cost;
  };
  void initial_potentials(std::size_t source);

  std::vector<Arc> arcs_;
  std::vector<std::vector<std::size_t>> out_;
  std::vector<double> potential_;
};

}  // namespace fcoord::flow
