#include "freightcoord/flow.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace fcoord::flow {

MaxFlow::MaxFlow(std::size_t num_nodes) : out_(num_nodes), level_(num_nodes), cursor_(num_nodes) {}

std::size_t MaxFlow::add_arc(std::size_t from, std::size_t to, long long capacity) {
  const std::size_t id = arcs_.size();
  arcs_.push_back({to, capacity, capacity});
  arcs_.push_back({from, 0, 0});
  out_[from].push_back(id);
  out_[to].push_back(id + 1);
  return id;
}

bool MaxFlow::build_levels(std::size_t source, std::size_t sink) {
  std::fill(level_.begin(), level_.end(), -1);
  std::deque<std::size_t> queue{source};
  level_[source] = 0;
  while (!queue.empty()) {
    const std::size_t v = queue.front();
    queue.pop_front();
    for (std::size_t id : out_[v]) {
      const Arc& arc = arcs_[id];
      if (arc.residual > 0 && level_[arc.to] < 0) {
        level_[arc.to] = level_[v] + 1;
        queue.push_back(arc.to);
      }
    }
  }
  return level_[sink] >= 0;
}

long long MaxFlow::push(std::size_t node, std::size_t sink, long long limit) {
  if (node == sink) return limit;
  for (std::size_t& i = cursor_[node]; i < out_[node].size(); ++i) {
    const std::size_t id = out_[node][i];
    Arc& arc = arcs_[id];
    if (arc.residual <= 0 || level_[arc.to] != level_[node] + 1) continue;
    const long long pushed = push(arc.to, sink, std::min(limit, arc.residual));
    if (pushed > 0) {
      arc.residual -= pushed;
      arcs_[id ^ 1].residual += pushed;
      return pushed;
    }
  }
  return 0;
}

long long MaxFlow::solve(std::size_t source, std::size_t sink) {
  long long total = 0;
  while (build_levels(source, sink)) {
    std::fill(cursor_.begin(), cursor_.end(), 0);
    while (long long pushed = push(source, sink, kInfiniteCapacity)) total += pushed;
  }
  return total;
}

long long MaxFlow::flow(std::size_t arc) const { return arcs_[arc].capacity - arcs_[arc].residual; }

MinCostFlow::MinCostFlow(std::size_t num_nodes) : out_(num_nodes), potential_(num_nodes, 0.0) {}

std::size_t MinCostFlow::add_arc(std::size_t from, std::size_t to, long long capacity, double cost) {
  const std::size_t id = arcs_.size();
  arcs_.push_back({from, to, capacity, capacity, cost});
  arcs_.push_back({to, from, 0, 0, -cost});
  out_[from].push_back(id);
  out_[to].push_back(id + 1);
  return id;
}

long long MinCostFlow::flow(std::size_t arc) const { return arcs_[arc].capacity - arcs_[arc].residual; }

// Bellman-Ford from the source over arcs with residual capacity; unreachable
// nodes keep potential 0 and stay unreachable afterwards.
void MinCostFlow::initial_potentials(std::size_t source) {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(out_.size(), inf);
  std::vector<bool> queued(out_.size(), false);
  std::deque<std::size_t> queue{source};
  dist[source] = 0.0;
  queued[source] = true;
  while (!queue.empty()) {
    const std::size_t v = queue.front();
    queue.pop_front();
    queued[v] = false;
    for (std::size_t id : out_[v]) {
      const Arc& arc = arcs_[id];
      if (arc.residual <= 0) continue;
      const double nd = dist[v] + arc.cost;
      if (nd < dist[arc.to] - 1e-12) {
        dist[arc.to] = nd;
        if (!queued[arc.to]) {
          queued[arc.to] = true;
          queue.push_back(arc.to);
        }
      }
    }
  }
  for (std::size_t v = 0; v < out_.size(); ++v) potential_[v] = std::isfinite(dist[v]) ? dist[v] : 0.0;
}

MinCostFlow::Result MinCostFlow::solve(std::size_t source, std::size_t sink, long long max_flow) {
  Result result;
  const std::size_t n = out_.size();
  const double inf = std::numeric_limits<double>::infinity();
  initial_potentials(source);

  std::vector<double> dist(n);
  std::vector<std::size_t> via(n);
  std::vector<bool> done(n);
  while (result.flow < max_flow) {
    // Dense Dijkstra on reduced costs; graphs here have a few hundred nodes.
    std::fill(dist.begin(), dist.end(), inf);
    std::fill(done.begin(), done.end(), false);
    dist[source] = 0.0;
    for (;;) {
      std::size_t v = n;
      for (std::size_t u = 0; u < n; ++u)
        if (!done[u] && dist[u] < inf && (v == n || dist[u] < dist[v])) v = u;
      if (v == n) break;
      done[v] = true;
      for (std::size_t id : out_[v]) {
        const Arc& arc = arcs_[id];
        if (arc.residual <= 0 || done[arc.to]) continue;
        const double reduced = std::max(0.0, arc.cost + potential_[v] - potential_[arc.to]);
        if (dist[v] + reduced < dist[arc.to]) {
          dist[arc.to] = dist[v] + reduced;
          via[arc.to] = id;
        }
      }
    }
    if (!(dist[sink] < inf)) break;
    for (std::size_t v = 0; v < n; ++v)
      if (dist[v] < inf) potential_[v] += dist[v];

    double path_cost = 0.0;
    long long bottleneck = max_flow - result.flow;
    for (std::size_t v = sink; v != source; v = arcs_[via[v]].from) {
      path_cost += arcs_[via[v]].cost;
      bottleneck = std::min(bottleneck, arcs_[via[v]].residual);
    }
    if (path_cost >= -1e-12) break;
    for (std::size_t v = sink; v != source; v = arcs_[via[v]].from) {
      arcs_[via[v]].residual -= bottleneck;
      arcs_[via[v] ^ 1].residual += bottleneck;
    }
    result.flow += bottleneck;
    result.cost += path_cost * static_cast<double>(bottleneck);
  }
  return result;
}

}  // namespace fcoord::flow
