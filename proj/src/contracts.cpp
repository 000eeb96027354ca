#include "freightcoord/contracts.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>
#include <tuple>

#include "freightcoord/branch_bound.hpp"
#include "freightcoord/error.hpp"
#include "freightcoord/flow.hpp"

namespace fcoord {

namespace {

void check_realization(const ContractFamily& family, std::span<const int> x) {
  if (x.size() != family.num_loads()) throw InputError("realization length does not match the family");
  for (int v : x)
    if (v < 0) throw InputError("realization must be nonnegative");
}

void check_costs(std::span<const int> x, std::span<const double> a) {
  if (a.size() != x.size()) throw InputError("alternate costs length does not match the realization");
  for (double v : a)
    if (!std::isfinite(v)) throw InputError("alternate costs must be finite");
}

bool sorted_unique(std::span<const LoadId> set, std::size_t n) {
  for (std::size_t k = 0; k < set.size(); ++k) {
    if (set[k].index >= n) return false;
    if (k > 0 && !(set[k - 1] < set[k])) return false;
  }
  return true;
}

double positive(double w) { return w > 0.0 ? w : 0.0; }

double finish_cost(AssignmentSolution& sol, std::span<const double> a) {
  sol.cost = 0.0;
  for (std::size_t l = 0; l < a.size(); ++l) sol.cost += a[l] * sol.alternate[l];
  return sol.cost;
}

}  // namespace

bool ContractFamily::covers(std::size_t load) const {
  const LoadId id{load};
  return load < num_loads() && is_feasible(std::span<const LoadId>(&id, 1));
}

long long ContractFamily::pack_count(std::span<const int> x) const { return generic_pack_count(*this, x); }

AssignmentSolution ContractFamily::assignment_cost(std::span<const int> x, int capacity,
                                                   std::span<const double> alternate_costs) const {
  return generic_assignment_cost(*this, x, capacity, alternate_costs);
}

std::optional<double> ContractFamily::fluid_pack_exact(std::span<const double>) const { return std::nullopt; }

// ---------------------------------------------------------------- lane level

std::vector<FeasibleSet> LaneLevelFamily::feasible_sets(std::size_t) const {
  std::vector<FeasibleSet> sets(num_loads_);
  for (std::size_t l = 0; l < num_loads_; ++l) sets[l] = {LoadId{l}};
  return sets;
}

bool LaneLevelFamily::is_feasible(std::span<const LoadId> set) const {
  return set.size() <= 1 && sorted_unique(set, num_loads_);
}

WeightedSet LaneLevelFamily::max_weight_set(std::span<const double> weights) const {
  if (weights.size() != num_loads_) throw InputError("weight vector length does not match the family");
  WeightedSet best;
  for (std::size_t l = 0; l < num_loads_; ++l) {
    if (weights[l] > best.weight) best = {{LoadId{l}}, weights[l]};
  }
  return best;
}

long long LaneLevelFamily::pack_count(std::span<const int> x) const {
  check_realization(*this, x);
  return std::accumulate(x.begin(), x.end(), 0LL);
}

AssignmentSolution LaneLevelFamily::assignment_cost(std::span<const int> x, int capacity,
                                                    std::span<const double> a) const {
  check_realization(*this, x);
  check_costs(x, a);
  if (capacity < 0) throw InputError("capacity must be nonnegative");
  AssignmentSolution sol;
  sol.alternate.assign(x.begin(), x.end());
  std::vector<std::size_t> order(num_loads_);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return a[i] > a[j]; });
  long long left = capacity;
  for (std::size_t l : order) {
    if (left == 0 || a[l] <= 0.0) break;
    const long long take = std::min<long long>(left, x[l]);
    for (long long c = 0; c < take; ++c) sol.contracts.push_back({LoadId{l}});
    sol.alternate[l] -= static_cast<int>(take);
    left -= take;
  }
  finish_cost(sol, a);
  return sol;
}

std::optional<double> LaneLevelFamily::fluid_pack_exact(std::span<const double> d) const {
  check_demand(d);
  return std::accumulate(d.begin(), d.end(), 0.0);
}

// ---------------------------------------------------------------- bipartite

BipartiteFamily::BipartiteFamily(std::size_t n_left, std::size_t n_right, std::vector<Edge> edges)
    : n_left_(n_left), n_right_(n_right), edges_(std::move(edges)), adjacency_(n_left) {
  if (n_left + n_right == 0) throw InputError("bipartite family needs at least one load");
  for (const auto& [i, j] : edges_)
    if (i >= n_left || j >= n_right) throw InputError("edge endpoint out of range");
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
  for (const auto& [i, j] : edges_) adjacency_[i].push_back(j);
}

std::vector<FeasibleSet> BipartiteFamily::feasible_sets(std::size_t) const {
  std::vector<FeasibleSet> sets;
  sets.reserve(num_loads() + edges_.size());
  for (std::size_t l = 0; l < num_loads(); ++l) sets.push_back({LoadId{l}});
  for (const auto& [i, j] : edges_) sets.push_back({LoadId{i}, LoadId{right_load(j)}});
  return sets;
}

bool BipartiteFamily::is_feasible(std::span<const LoadId> set) const {
  if (!sorted_unique(set, num_loads())) return false;
  if (set.size() <= 1) return true;
  if (set.size() > 2) return false;
  const std::size_t i = set[0].index, r = set[1].index;
  if (i >= n_left_ || r < n_left_) return false;
  return std::binary_search(edges_.begin(), edges_.end(), Edge{i, r - n_left_});
}

WeightedSet BipartiteFamily::max_weight_set(std::span<const double> w) const {
  if (w.size() != num_loads()) throw InputError("weight vector length does not match the family");
  WeightedSet best;
  for (std::size_t l = 0; l < num_loads(); ++l)
    if (w[l] > best.weight) best = {{LoadId{l}}, w[l]};
  for (const auto& [i, j] : edges_) {
    const std::size_t r = right_load(j);
    const double v = positive(w[i]) + positive(w[r]);
    if (v > best.weight && w[i] > 0.0 && w[r] > 0.0) best = {{LoadId{i}, LoadId{r}}, v};
  }
  return best;
}

long long BipartiteFamily::pack_count(std::span<const int> x) const {
  check_realization(*this, x);
  const std::size_t source = num_loads(), sink = num_loads() + 1;
  flow::MaxFlow net(num_loads() + 2);
  for (std::size_t i = 0; i < n_left_; ++i)
    if (x[i] > 0) net.add_arc(source, i, x[i]);
  for (std::size_t j = 0; j < n_right_; ++j)
    if (x[right_load(j)] > 0) net.add_arc(right_load(j), sink, x[right_load(j)]);
  for (const auto& [i, j] : edges_)
    if (x[i] > 0 && x[right_load(j)] > 0) net.add_arc(i, right_load(j), flow::kInfiniteCapacity);
  const long long matched = net.solve(source, sink);
  return std::accumulate(x.begin(), x.end(), 0LL) - matched;
}

AssignmentSolution BipartiteFamily::assignment_cost(std::span<const int> x, int capacity,
                                                    std::span<const double> a) const {
  check_realization(*this, x);
  check_costs(x, a);
  if (capacity < 0) throw InputError("capacity must be nonnegative");
  // Nodes: loads, then source, hub, sink. One flow unit is one contract:
  // hub -> left i [-> right j] -> sink, or hub -> right j -> sink.
  const std::size_t L = num_loads();
  const std::size_t source = L, hub = L + 1, sink = L + 2;
  flow::MinCostFlow net(L + 3);
  net.add_arc(source, hub, capacity, 0.0);
  std::vector<std::size_t> left_in(n_left_, SIZE_MAX), right_out(n_right_, SIZE_MAX), hub_right(n_right_, SIZE_MAX);
  std::vector<std::pair<std::size_t, Edge>> pair_arcs;
  for (std::size_t i = 0; i < n_left_; ++i) {
    if (x[i] <= 0 || a[i] <= 0.0) continue;
    left_in[i] = net.add_arc(hub, i, x[i], -a[i]);
    net.add_arc(i, sink, flow::kInfiniteCapacity, 0.0);
  }
  for (std::size_t j = 0; j < n_right_; ++j) {
    const std::size_t r = right_load(j);
    if (x[r] <= 0 || a[r] <= 0.0) continue;
    right_out[j] = net.add_arc(r, sink, x[r], -a[r]);
    hub_right[j] = net.add_arc(hub, r, flow::kInfiniteCapacity, 0.0);
  }
  for (const auto& e : edges_) {
    if (left_in[e.first] == SIZE_MAX || right_out[e.second] == SIZE_MAX) continue;
    pair_arcs.emplace_back(net.add_arc(e.first, right_load(e.second), flow::kInfiniteCapacity, 0.0), e);
  }
  net.solve(source, sink, capacity);

  AssignmentSolution sol;
  sol.alternate.assign(x.begin(), x.end());
  std::vector<long long> paired_left(n_left_, 0);
  for (const auto& [arc, e] : pair_arcs) {
    const long long f = net.flow(arc);
    for (long long c = 0; c < f; ++c) sol.contracts.push_back({LoadId{e.first}, LoadId{right_load(e.second)}});
    paired_left[e.first] += f;
    sol.alternate[e.first] -= static_cast<int>(f);
    sol.alternate[right_load(e.second)] -= static_cast<int>(f);
  }
  for (std::size_t i = 0; i < n_left_; ++i) {
    if (left_in[i] == SIZE_MAX) continue;
    const long long single = net.flow(left_in[i]) - paired_left[i];
    for (long long c = 0; c < single; ++c) sol.contracts.push_back({LoadId{i}});
    sol.alternate[i] -= static_cast<int>(single);
  }
  for (std::size_t j = 0; j < n_right_; ++j) {
    if (hub_right[j] == SIZE_MAX) continue;
    const long long single = net.flow(hub_right[j]);
    for (long long c = 0; c < single; ++c) sol.contracts.push_back({LoadId{right_load(j)}});
    sol.alternate[right_load(j)] -= static_cast<int>(single);
  }
  finish_cost(sol, a);
  return sol;
}

// ---------------------------------------------------------------- regional

RegionalFamily::RegionalFamily(int num_slots, std::vector<int> colors, std::vector<SlotInterval> intervals)
    : num_slots_(num_slots), num_colors_(0), colors_(std::move(colors)), intervals_(std::move(intervals)) {
  if (num_slots_ <= 0) throw InputError("regional family needs at least one slot");
  if (colors_.empty()) throw InputError("regional family needs at least one load");
  if (colors_.size() != intervals_.size()) throw InputError("need one interval per load");
  for (int c : colors_) {
    if (c < 0) throw InputError("colors must be nonnegative");
    num_colors_ = std::max(num_colors_, c + 1);
  }
  for (const auto& iv : intervals_)
    if (iv.first < 1 || iv.last < iv.first || iv.last > num_slots_)
      throw InputError("intervals must be nonempty contiguous slot ranges within [1, T]");
  // Largest disjoint subset per color: earliest-end greedy.
  max_set_size_ = 0;
  for (int k = 0; k < num_colors_; ++k) {
    std::vector<std::size_t> ids;
    for (std::size_t l = 0; l < colors_.size(); ++l)
      if (colors_[l] == k) ids.push_back(l);
    std::sort(ids.begin(), ids.end(), [&](std::size_t i, std::size_t j) { return intervals_[i].last < intervals_[j].last; });
    std::size_t count = 0;
    int end = 0;
    for (std::size_t l : ids)
      if (intervals_[l].first > end) {
        ++count;
        end = intervals_[l].last;
      }
    max_set_size_ = std::max(max_set_size_, count);
  }
}

bool RegionalFamily::overlaps(std::size_t a, std::size_t b) const {
  return intervals_[a].first <= intervals_[b].last && intervals_[b].first <= intervals_[a].last;
}

bool RegionalFamily::is_feasible(std::span<const LoadId> set) const {
  if (!sorted_unique(set, num_loads())) return false;
  for (std::size_t i = 0; i < set.size(); ++i)
    for (std::size_t j = i + 1; j < set.size(); ++j)
      if (colors_[set[i].index] != colors_[set[j].index] || overlaps(set[i].index, set[j].index)) return false;
  return true;
}

std::vector<FeasibleSet> RegionalFamily::feasible_sets(std::size_t limit) const {
  // Maximal same-color chains of disjoint intervals.
  std::vector<FeasibleSet> out;
  for (int k = 0; k < num_colors_; ++k) {
    std::vector<std::size_t> ids;
    for (std::size_t l = 0; l < colors_.size(); ++l)
      if (colors_[l] == k) ids.push_back(l);
    std::sort(ids.begin(), ids.end(), [&](std::size_t i, std::size_t j) {
      return std::tie(intervals_[i].first, intervals_[i].last, i) < std::tie(intervals_[j].first, intervals_[j].last, j);
    });
    std::vector<std::size_t> chain;
    std::size_t visited = 0;
    auto maximal = [&]() {
      for (std::size_t l : ids) {
        bool free = std::none_of(chain.begin(), chain.end(), [&](std::size_t c) { return c == l || overlaps(c, l); });
        if (free) return false;
      }
      return true;
    };
    auto extend = [&](auto&& self, int end) -> void {
      if (++visited > 50 * limit) throw CapabilityError("regional family has too many maximal contracts to enumerate");
      bool any = false;
      for (std::size_t l : ids) {
        if (intervals_[l].first <= end) continue;
        any = true;
        chain.push_back(l);
        self(self, intervals_[l].last);
        chain.pop_back();
      }
      if (!any && !chain.empty() && maximal()) {
        if (out.size() >= limit) throw CapabilityError("regional family has too many maximal contracts to enumerate");
        FeasibleSet set;
        for (std::size_t l : chain) set.push_back(LoadId{l});
        std::sort(set.begin(), set.end());
        out.push_back(std::move(set));
      }
    };
    extend(extend, 0);
  }
  return out;
}

WeightedSet RegionalFamily::max_weight_set(std::span<const double> w) const {
  if (w.size() != num_loads()) throw InputError("weight vector length does not match the family");
  WeightedSet best;
  for (int k = 0; k < num_colors_; ++k) {
    std::vector<std::size_t> ids;
    for (std::size_t l = 0; l < colors_.size(); ++l)
      if (colors_[l] == k && w[l] > 0.0) ids.push_back(l);
    if (ids.empty()) continue;
    std::sort(ids.begin(), ids.end(), [&](std::size_t i, std::size_t j) {
      return std::tie(intervals_[i].last, i) < std::tie(intervals_[j].last, j);
    });
    // value[m] = best weight using the first m intervals (by end slot).
    const std::size_t n = ids.size();
    std::vector<double> value(n + 1, 0.0);
    std::vector<std::size_t> prev(n);
    std::vector<bool> take(n);
    for (std::size_t m = 0; m < n; ++m) {
      const int start = intervals_[ids[m]].first;
      std::size_t p = m;
      while (p > 0 && intervals_[ids[p - 1]].last >= start) --p;
      prev[m] = p;
      const double with = w[ids[m]] + value[p];
      take[m] = with > value[m];
      value[m + 1] = take[m] ? with : value[m];
    }
    if (value[n] > best.weight) {
      FeasibleSet set;
      for (std::size_t m = n; m > 0;) {
        if (take[m - 1]) {
          set.push_back(LoadId{ids[m - 1]});
          m = prev[m - 1];
        } else {
          --m;
        }
      }
      std::sort(set.begin(), set.end());
      best = {std::move(set), value[n]};
    }
  }
  return best;
}

long long RegionalFamily::pack_count(std::span<const int> x) const {
  check_realization(*this, x);
  long long total = 0;
  std::vector<long long> load(static_cast<std::size_t>(num_slots_) + 2);
  for (int k = 0; k < num_colors_; ++k) {
    std::fill(load.begin(), load.end(), 0);
    for (std::size_t l = 0; l < colors_.size(); ++l) {
      if (colors_[l] != k || x[l] == 0) continue;
      load[intervals_[l].first] += x[l];
      load[intervals_[l].last + 1] -= x[l];
    }
    long long run = 0, peak = 0;
    for (int t = 1; t <= num_slots_; ++t) {
      run += load[t];
      peak = std::max(peak, run);
    }
    total += peak;
  }
  return total;
}

AssignmentSolution RegionalFamily::assignment_cost(std::span<const int> x, int capacity,
                                                   std::span<const double> a) const {
  check_realization(*this, x);
  check_costs(x, a);
  if (capacity < 0) throw InputError("capacity must be nonnegative");
  // Per color a line of slot nodes 1..T+1; a flow unit walks the line and
  // may jump over the interval of a load, so each unit is one contract.
  const std::size_t T = static_cast<std::size_t>(num_slots_);
  const std::size_t per_color = T + 1;
  const std::size_t K = static_cast<std::size_t>(num_colors_);
  const std::size_t source = K * per_color, hub = source + 1, sink = source + 2;
  auto node = [&](std::size_t k, int slot) { return k * per_color + static_cast<std::size_t>(slot - 1); };
  flow::MinCostFlow net(K * per_color + 3);
  net.add_arc(source, hub, capacity, 0.0);
  std::vector<std::size_t> load_arc(num_loads(), SIZE_MAX);
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> out_arcs(K * per_color);  // (arc, load or SIZE_MAX)
  std::vector<bool> used(K, false);
  for (std::size_t l = 0; l < num_loads(); ++l)
    if (x[l] > 0 && a[l] > 0.0) used[static_cast<std::size_t>(colors_[l])] = true;
  for (std::size_t k = 0; k < K; ++k) {
    if (!used[k]) continue;
    net.add_arc(hub, node(k, 1), flow::kInfiniteCapacity, 0.0);
    for (int t = 1; t <= num_slots_; ++t)
      out_arcs[node(k, t)].emplace_back(net.add_arc(node(k, t), node(k, t + 1), flow::kInfiniteCapacity, 0.0), SIZE_MAX);
    net.add_arc(node(k, num_slots_ + 1), sink, flow::kInfiniteCapacity, 0.0);
  }
  for (std::size_t l = 0; l < num_loads(); ++l) {
    if (x[l] <= 0 || a[l] <= 0.0) continue;
    const auto k = static_cast<std::size_t>(colors_[l]);
    const std::size_t from = node(k, intervals_[l].first);
    load_arc[l] = net.add_arc(from, node(k, intervals_[l].last + 1), x[l], -a[l]);
    out_arcs[from].emplace_back(load_arc[l], l);
  }
  const auto result = net.solve(source, sink, capacity);

  AssignmentSolution sol;
  sol.alternate.assign(x.begin(), x.end());
  // Decompose the flow of each color into unit paths along the slot line.
  std::map<std::size_t, long long> remaining;
  for (const auto& arcs : out_arcs)
    for (const auto& [arc, l] : arcs) remaining[arc] = net.flow(arc);
  for (std::size_t k = 0; k < K && result.flow > 0; ++k) {
    if (!used[k]) continue;
    for (;;) {
      int t = 1;
      FeasibleSet contract;
      bool moved = false;
      while (t <= num_slots_) {
        std::size_t next_arc = SIZE_MAX, via = SIZE_MAX;
        for (const auto& [arc, l] : out_arcs[node(k, t)]) {
          if (remaining[arc] <= 0) continue;
          if (next_arc == SIZE_MAX || l != SIZE_MAX) {
            next_arc = arc;
            via = l;
            if (l != SIZE_MAX) break;
          }
        }
        if (next_arc == SIZE_MAX) break;
        moved = true;
        --remaining[next_arc];
        if (via != SIZE_MAX) {
          contract.push_back(LoadId{via});
          t = intervals_[via].last + 1;
        } else {
          ++t;
        }
      }
      if (!moved) break;
      std::sort(contract.begin(), contract.end());
      for (LoadId id : contract) --sol.alternate[id.index];
      if (!contract.empty()) sol.contracts.push_back(std::move(contract));
    }
  }
  finish_cost(sol, a);
  return sol;
}

std::optional<double> RegionalFamily::fluid_pack_exact(std::span<const double> d) const {
  check_demand(d);
  if (d.size() != num_loads()) throw InputError("demand length does not match the family");
  double total = 0.0;
  std::vector<long long> base(static_cast<std::size_t>(num_slots_) + 2), diff(base.size());
  for (int k = 0; k < num_colors_; ++k) {
    std::fill(base.begin(), base.end(), 0);
    std::vector<std::size_t> frac;
    std::vector<double> prob;
    for (std::size_t l = 0; l < colors_.size(); ++l) {
      if (colors_[l] != k) continue;
      const double fl = std::floor(d[l]);
      const auto whole = static_cast<long long>(fl);
      base[intervals_[l].first] += whole;
      base[intervals_[l].last + 1] -= whole;
      if (d[l] - fl > 0.0) {
        frac.push_back(l);
        prob.push_back(d[l] - fl);
      }
    }
    if (frac.size() > 20) return std::nullopt;
    double expect = 0.0;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << frac.size()); ++mask) {
      double p = 1.0;
      diff = base;
      for (std::size_t b = 0; b < frac.size(); ++b) {
        if (mask >> b & 1) {
          p *= prob[b];
          diff[intervals_[frac[b]].first] += 1;
          diff[intervals_[frac[b]].last + 1] -= 1;
        } else {
          p *= 1.0 - prob[b];
        }
      }
      if (p == 0.0) continue;
      long long run = 0, peak = 0;
      for (int t = 1; t <= num_slots_; ++t) {
        run += diff[t];
        peak = std::max(peak, run);
      }
      expect += p * static_cast<double>(peak);
    }
    total += expect;
  }
  return total;
}

// ---------------------------------------------------------------- explicit

ExplicitFamily::ExplicitFamily(std::size_t num_loads, std::vector<FeasibleSet> sets)
    : num_loads_(num_loads), covered_(num_loads, false), max_set_size_(0) {
  if (num_loads == 0) throw InputError("explicit family needs at least one load");
  for (auto& set : sets) {
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());
    if (set.empty()) continue;
    for (LoadId id : set) {
      if (id.index >= num_loads) throw InputError("feasible set references an unknown load");
      covered_[id.index] = true;
    }
    max_set_size_ = std::max(max_set_size_, set.size());
    sets_.push_back(std::move(set));
  }
}

std::vector<FeasibleSet> ExplicitFamily::feasible_sets(std::size_t) const { return sets_; }

bool ExplicitFamily::is_feasible(std::span<const LoadId> set) const {
  if (!sorted_unique(set, num_loads_)) return false;
  if (set.empty()) return true;
  return std::any_of(sets_.begin(), sets_.end(), [&](const FeasibleSet& g) {
    return std::includes(g.begin(), g.end(), set.begin(), set.end());
  });
}

bool ExplicitFamily::covers(std::size_t load) const { return load < num_loads_ && covered_[load]; }

WeightedSet ExplicitFamily::max_weight_set(std::span<const double> w) const {
  if (w.size() != num_loads_) throw InputError("weight vector length does not match the family");
  WeightedSet best;
  for (const auto& g : sets_) {
    WeightedSet cand;
    for (LoadId id : g)
      if (w[id.index] > 0.0) {
        cand.set.push_back(id);
        cand.weight += w[id.index];
      }
    if (cand.weight > best.weight) best = std::move(cand);
  }
  return best;
}

// ---------------------------------------------------------------- free functions

double separation_tolerance(double mu) { return 1e-7 * std::max(1.0, mu); }

long long pack_count(const ContractFamily& family, std::span<const int> x) {
  check_realization(family, x);
  return family.pack_count(x);
}

double fluid_pack_enumerate(const ContractFamily& family, std::span<const double> d, std::size_t max_fractional) {
  check_demand(d);
  if (d.size() != family.num_loads()) throw InputError("demand length does not match the family");
  std::vector<int> base(d.size());
  std::vector<std::size_t> frac;
  for (std::size_t l = 0; l < d.size(); ++l) {
    const double fl = std::floor(d[l]);
    base[l] = static_cast<int>(fl);
    if (d[l] > fl) frac.push_back(l);
  }
  if (frac.size() > max_fractional)
    throw CapabilityError("too many fractional coordinates to enumerate (" + std::to_string(frac.size()) + ")");
  double total = 0.0;
  std::vector<int> x(base);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << frac.size()); ++mask) {
    double p = 1.0;
    for (std::size_t b = 0; b < frac.size(); ++b) {
      const std::size_t l = frac[b];
      const double f = d[l] - base[l];
      const bool up = mask >> b & 1;
      x[l] = base[l] + (up ? 1 : 0);
      p *= up ? f : 1.0 - f;
    }
    if (p != 0.0) total += p * static_cast<double>(family.pack_count(x));
  }
  return total;
}

Estimate fluid_pack(const ContractFamily& family, std::span<const double> d, std::size_t n_samples, std::uint64_t seed) {
  check_demand(d);
  if (d.size() != family.num_loads()) throw InputError("demand length does not match the family");
  if (auto exact = family.fluid_pack_exact(d)) return {*exact, 0.0, true};
  if (std::all_of(d.begin(), d.end(), [](double v) { return v == std::floor(v); })) {
    std::vector<int> x(d.size());
    for (std::size_t l = 0; l < d.size(); ++l) x[l] = static_cast<int>(d[l]);
    return {static_cast<double>(family.pack_count(x)), 0.0, true};
  }
  if (n_samples < 2) throw InputError("Monte Carlo estimate needs at least two samples");
  const RngStream root(seed);
  double sum = 0.0, sum_sq = 0.0;
  for (std::size_t k = 0; k < n_samples; ++k) {
    const auto x = sample_realization(d, root.substream(k));
    const auto v = static_cast<double>(family.pack_count(x));
    sum += v;
    sum_sq += v * v;
  }
  const double n = static_cast<double>(n_samples);
  const double mean = sum / n;
  const double var = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0));
  return {mean, std::sqrt(var / n), false};
}

AssignmentSolution assignment_cost(const ContractFamily& family, std::span<const int> x, int capacity,
                                   std::span<const double> alternate_costs) {
  check_realization(family, x);
  check_costs(x, alternate_costs);
  if (capacity < 0) throw InputError("capacity must be nonnegative");
  return family.assignment_cost(x, capacity, alternate_costs);
}

std::optional<ViolatedSet> separation_oracle(const ContractFamily& family, const ShadowPrices& prices) {
  for (double v : prices.lambda)
    if (!(v >= 0.0)) throw InputError("separation needs nonnegative lambda");
  WeightedSet best = family.max_weight_set(prices.lambda);
  if (best.weight - prices.mu > separation_tolerance(prices.mu)) return ViolatedSet{std::move(best.set), best.weight};
  return std::nullopt;
}

BipartiteFamily gen_er_bipartite(std::size_t n_left, std::size_t n_right, double p, std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw InputError("edge probability must lie in [0, 1]");
  const RngStream stream(seed);
  std::vector<BipartiteFamily::Edge> edges;
  for (std::size_t i = 0; i < n_left; ++i)
    for (std::size_t j = 0; j < n_right; ++j)
      if (stream.uniform(i * n_right + j) < p) edges.emplace_back(i, j);
  return BipartiteFamily(n_left, n_right, std::move(edges));
}

Estimate substitutability_gap(const ContractFamily& family, std::span<const int> x, std::size_t n_samples,
                              std::uint64_t seed) {
  check_realization(family, x);
  std::vector<double> half(x.size());
  std::size_t odd = 0;
  for (std::size_t l = 0; l < x.size(); ++l) {
    half[l] = 0.5 * x[l];
    if (x[l] % 2 != 0) ++odd;
  }
  const double full = 0.5 * static_cast<double>(family.pack_count(x));
  if (auto exact = family.fluid_pack_exact(half)) return {*exact - full, 0.0, true};
  if (odd <= 16) return {fluid_pack_enumerate(family, half, 16) - full, 0.0, true};
  Estimate e = fluid_pack(family, half, n_samples, seed);
  e.value -= full;
  return e;
}

double regional_gap_bound(const RegionalFamily& family) {
  const double L = static_cast<double>(family.num_loads());
  const double K = family.num_colors();
  const double T = family.num_slots();
  return std::sqrt(L * K * std::log(T) / 2.0);
}

std::vector<BipartiteFamily::Edge> read_edge_list(std::istream& in) {
  std::vector<BipartiteFamily::Edge> edges;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    long long i = 0, j = 0;
    if (!(fields >> i)) continue;
    std::string rest;
    if (!(fields >> j) || (fields >> rest) || i < 0 || j < 0)
      throw InputError("edge list line " + std::to_string(line_no) + ": expected two nonnegative indices");
    edges.emplace_back(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  }
  return edges;
}

void write_edge_list(std::ostream& out, std::span<const BipartiteFamily::Edge> edges) {
  for (const auto& [i, j] : edges) out << i << ' ' << j << '\n';
}

std::optional<std::string> check_assignment(const ContractFamily& family, std::span<const int> x, int capacity,
                                            std::span<const double> a, const AssignmentSolution& sol) {
  if (sol.contracts.size() > static_cast<std::size_t>(std::max(capacity, 0))) return "more contracts than capacity";
  if (sol.alternate.size() != x.size()) return "alternate vector has wrong length";
  std::vector<long long> covered(x.size(), 0);
  for (const auto& c : sol.contracts) {
    if (!family.is_feasible(c)) return "infeasible contract in solution";
    for (LoadId id : c) ++covered[id.index];
  }
  double cost = 0.0;
  for (std::size_t l = 0; l < x.size(); ++l) {
    if (sol.alternate[l] < 0) return "negative alternate count for load " + std::to_string(l);
    if (covered[l] + sol.alternate[l] < x[l]) return "load " + std::to_string(l) + " is not fully covered";
    cost += a[l] * sol.alternate[l];
  }
  if (std::fabs(cost - sol.cost) > 1e-9 * std::max(1.0, std::fabs(cost))) return "reported cost does not match";
  return std::nullopt;
}

}  // namespace fcoord
