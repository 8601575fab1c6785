#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <vector>

#include "dpprice/core/follower.hpp"
#include "dpprice/diagrams/diagram.hpp"

namespace dpprice {

namespace dd_detail {

inline const std::vector<std::int64_t>& weights(const PricingInstance& inst) {
  return inst.kind() == ProblemKind::kip ? inst.kip().weights : inst.knapsack().weights;
}

inline std::int64_t capacity(const PricingInstance& inst) {
  return inst.kind() == ProblemKind::kip ? inst.kip().capacity : inst.knapsack().capacity;
}

inline bool knapsack_like(const PricingInstance& inst) {
  return inst.kind() == ProblemKind::kpp || inst.kind() == ProblemKind::kip;
}

inline std::int64_t weight_of(const PricingInstance& inst, const ItemSet& s) {
  const auto& w = weights(inst);
  std::int64_t t = 0;
  for_each_item(s, [&](int i) { t += w[i]; });
  return t;
}

inline ItemSet neighborhood_of(const PricingInstance& inst, const ItemSet& s) {
  ItemSet out(static_cast<std::size_t>(inst.n));
  for_each_item(s, [&](int i) { out |= inst.graph().closed_neighborhood[i]; });
  return out;
}

inline ItemSet union_of_sets(const PricingInstance& inst, const ItemSet& s) {
  const auto& d = inst.set_cover();
  ItemSet out(static_cast<std::size_t>(d.num_elements));
  for_each_item(s, [&](int i) { out |= d.sets[i]; });
  return out;
}

inline bool is_stable(const PricingInstance& inst, const ItemSet& s) {
  bool ok = true;
  for_each_item(s, [&](int i) {
    if (ok && (inst.graph().closed_neighborhood[i] & s).count() > 1) ok = false;
  });
  return ok;
}

inline ItemSet group_set(const PricingInstance& inst, const std::vector<int>& g) {
  return make_set(static_cast<std::size_t>(inst.n), g);
}

}  // namespace dd_detail

inline NodeState dd_source_state(const PricingInstance& inst) {
  switch (inst.kind()) {
    case ProblemKind::kpp:
    case ProblemKind::kip: return CapacityState{dd_detail::capacity(inst)};
    case ProblemKind::maxsspp: return AvailState{full_set(static_cast<std::size_t>(inst.n))};
    case ProblemKind::minscpp:
      return UncoveredState{full_set(static_cast<std::size_t>(inst.set_cover().num_elements))};
  }
  return TerminalState{};
}

inline NodeState dd_terminal_state(const PricingInstance& inst) {
  switch (inst.kind()) {
    case ProblemKind::kpp:
    case ProblemKind::kip: return CapacityState{0};
    case ProblemKind::maxsspp: return AvailState{ItemSet(static_cast<std::size_t>(inst.n))};
    case ProblemKind::minscpp:
      return UncoveredState{ItemSet(static_cast<std::size_t>(inst.set_cover().num_elements))};
  }
  return TerminalState{};
}

// State after fixing the items of one group, `taken` being the chosen subset.
// Returns nullopt when the decision is infeasible.
inline std::optional<NodeState> dd_step(const PricingInstance& inst, const NodeState& s, const ItemSet& group,
                                        const ItemSet& taken) {
  switch (inst.kind()) {
    case ProblemKind::kpp:
    case ProblemKind::kip: {
      const auto r = std::get<CapacityState>(s).remaining - dd_detail::weight_of(inst, taken);
      if (r < 0) return std::nullopt;
      return CapacityState{r};
    }
    case ProblemKind::maxsspp: {
      const auto& avail = std::get<AvailState>(s).available;
      if (!taken.is_subset_of(avail) || !dd_detail::is_stable(inst, taken)) return std::nullopt;
      return AvailState{(avail - group) - dd_detail::neighborhood_of(inst, taken)};
    }
    case ProblemKind::minscpp:
      return UncoveredState{std::get<UncoveredState>(s).uncovered - dd_detail::union_of_sets(inst, taken)};
  }
  return std::nullopt;
}

// State trajectory of x at the layer boundaries 0..m; the last entry is q's state.
inline std::vector<NodeState> dd_path_for_solution(const PricingInstance& inst, const ItemSet& x,
                                                   const GroupPartition& grouping) {
  std::vector<NodeState> path{dd_source_state(inst)};
  for (const auto& g : grouping.groups) {
    const auto group = dd_detail::group_set(inst, g);
    auto next = dd_step(inst, path.back(), group, x & group);
    if (!next) throw ValidationError("solution is infeasible for the decision diagram");
    path.push_back(std::move(*next));
  }
  if (inst.kind() == ProblemKind::minscpp && std::get<UncoveredState>(path.back()).uncovered.any())
    throw ValidationError("solution is not a cover");
  path.back() = dd_terminal_state(inst);
  return path;
}

// Membership test for the set of valid multi-layer transitions.
inline bool dd_valid_transition(const PricingInstance& inst, const NodeState& src, const NodeState& dst,
                                const ItemSet& items) {
  switch (inst.kind()) {
    case ProblemKind::kpp:
    case ProblemKind::kip:
      return std::get<CapacityState>(src).remaining - dd_detail::weight_of(inst, items) >=
             std::get<CapacityState>(dst).remaining;
    case ProblemKind::maxsspp: {
      const auto& sj = std::get<AvailState>(src).available;
      const auto& sk = std::get<AvailState>(dst).available;
      return dd_detail::is_stable(inst, items) && items.is_subset_of(sj) &&
             sk.is_subset_of(sj - dd_detail::neighborhood_of(inst, items));
    }
    case ProblemKind::minscpp:
      return (std::get<UncoveredState>(src).uncovered - dd_detail::union_of_sets(inst, items))
          .is_subset_of(std::get<UncoveredState>(dst).uncovered);
  }
  return false;
}

// Decision diagram with only p and q.
inline Diagram dd_empty(const PricingInstance& inst, const GroupPartition& grouping) {
  if (!grouping.is_partition(inst.n)) throw ConfigError("grouping is not a partition of the items");
  const int m = grouping.size();
  Diagram d(DiagramKind::decision, inst.n, m + 1);
  d.set_grouping(grouping);
  d.set_source(d.add_node(0, dd_source_state(inst)));
  d.set_terminal(d.add_node(m, dd_terminal_state(inst)));
  return d;
}

// Adds the exact path of x (used by the initial construction).
inline void dd_insert_path(Diagram& d, const PricingInstance& inst, const ItemSet& x) {
  const auto& grouping = *d.grouping();
  const auto states = dd_path_for_solution(inst, x, grouping);
  const int m = grouping.size();
  int prev = d.p();
  for (int k = 1; k <= m; ++k) {
    const int cur = k == m ? d.q() : d.add_node(k, states[k]);
    d.add_arc(prev, cur, x & dd_detail::group_set(inst, grouping.groups[k - 1]));
    prev = cur;
  }
}

// Union of W sampled solution paths.
inline Diagram dd_init(const PricingInstance& inst, const FollowerProblem& problem, int W,
                       const GroupPartition& grouping, Rng& rng) {
  if (W < 0) throw ConfigError("width must be nonnegative");
  Diagram d = dd_empty(inst, grouping);
  for (int k = 0; k < W; ++k) dd_insert_path(d, inst, problem.sample_solution(rng));
  return d;
}

// Splices x into the diagram along the valid-transition path with the most
// arcs; among those, the lexicographically smallest node-id sequence. Returns
// the ids of arcs that were not present before.
inline std::vector<int> dd_add_solution(Diagram& d, const PricingInstance& inst, const ItemSet& x) {
  const auto& grouping = *d.grouping();
  const int m = grouping.size();
  std::vector<ItemSet> prefix(static_cast<std::size_t>(m) + 1, ItemSet(static_cast<std::size_t>(inst.n)));
  for (int k = 1; k <= m; ++k) prefix[k] = prefix[k - 1] | dd_detail::group_set(inst, grouping.groups[k - 1]);
  const auto& nodes = d.nodes();
  const auto nn = nodes.size();
  std::vector<std::vector<int>> succ(nn);
  for (const auto& u : nodes) {
    for (const auto& w : nodes) {
      if (w.layer <= u.layer) continue;
      const ItemSet items = x & (prefix[w.layer] - prefix[u.layer]);
      if (dd_valid_transition(inst, u.state, w.state, items)) succ[u.id].push_back(w.id);
    }
  }
  std::vector<int> len(nn, -1);
  len[d.q()] = 0;
  const auto order = d.topological_order();
  for (auto it = order.rbegin(); it != order.rend(); ++it)
    for (int w : succ[*it])
      if (len[w] >= 0) len[*it] = std::max(len[*it], len[w] + 1);
  if (len[d.p()] < 0) throw ValidationError("solution cannot be spliced into the diagram");
  std::vector<int> added;
  for (int u = d.p(); u != d.q();) {
    int next = -1;
    for (int w : succ[u])
      if (len[w] == len[u] - 1 && (next < 0 || w < next)) next = w;
    const ItemSet items = x & (prefix[nodes[next].layer] - prefix[nodes[u].layer]);
    if (auto a = d.add_arc(u, next, items)) added.push_back(*a);
    u = next;
  }
  return added;
}

// Complete decision diagram by exhaustive expansion, merging equal states per
// layer and dropping nodes that cannot reach q. With `simplify` on knapsack
// instances, states that can still take every remaining item are merged and
// only take the items; an arc is dropped when a parallel arc carries a strict
// superset of its items.
inline Diagram dd_full(const PricingInstance& inst, const GroupPartition& grouping, bool simplify = true,
                       std::size_t max_nodes = 200000) {
  if (!grouping.is_partition(inst.n)) throw ConfigError("grouping is not a partition of the items");
  const int m = grouping.size();
  const bool merge = simplify && dd_detail::knapsack_like(inst);
  std::vector<ItemSet> groups;
  for (const auto& g : grouping.groups) {
    if (g.size() > 20) throw SizeLimitExceeded("group too large for full expansion");
    groups.push_back(dd_detail::group_set(inst, g));
  }
  std::vector<std::int64_t> rest(static_cast<std::size_t>(m) + 1, 0);
  if (dd_detail::knapsack_like(inst))
    for (int k = m - 1; k >= 0; --k) rest[k] = rest[k + 1] + dd_detail::weight_of(inst, groups[k]);

  struct RawArc {
    int src, dst;
    ItemSet items;
  };
  std::vector<std::vector<NodeState>> states(static_cast<std::size_t>(m) + 1);
  std::vector<std::map<std::string, int>> index(static_cast<std::size_t>(m) + 1);
  std::vector<std::vector<RawArc>> raw(static_cast<std::size_t>(m));
  states[0].push_back(dd_source_state(inst));
  states[m].push_back(dd_terminal_state(inst));
  std::size_t total = 2;
  for (int k = 0; k < m; ++k) {
    const auto& g = grouping.groups[k];
    for (int u = 0; u < static_cast<int>(states[k].size()); ++u) {
      const NodeState su = states[k][u];
      const bool forced = merge && std::get<CapacityState>(su).remaining >= rest[k];
      std::vector<RawArc> local;
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << g.size()); ++mask) {
        ItemSet taken(static_cast<std::size_t>(inst.n));
        for (std::size_t b = 0; b < g.size(); ++b)
          if (mask >> b & 1U) taken.set(g[b]);
        if (forced && taken != groups[k]) continue;
        auto next = dd_step(inst, su, groups[k], taken);
        if (!next) continue;
        int dst = 0;
        if (k + 1 == m) {
          if (inst.kind() == ProblemKind::minscpp && std::get<UncoveredState>(*next).uncovered.any()) continue;
        } else {
          if (merge && std::get<CapacityState>(*next).remaining >= rest[k + 1])
            next = CapacityState{rest[k + 1]};
          const auto key = state_key(*next);
          auto it = index[k + 1].find(key);
          if (it == index[k + 1].end()) {
            dst = static_cast<int>(states[k + 1].size());
            states[k + 1].push_back(*next);
            index[k + 1].emplace(key, dst);
            if (++total > max_nodes) throw SizeLimitExceeded("decision diagram too large");
          } else {
            dst = it->second;
          }
        }
        local.push_back({u, dst, std::move(taken)});
      }
      for (const auto& a : local) {
        bool dominated = false;
        if (merge)
          for (const auto& b : local)
            if (b.dst == a.dst && a.items != b.items && a.items.is_subset_of(b.items)) dominated = true;
        if (!dominated) raw[k].push_back(a);
      }
    }
  }
  // Backward reachability to q.
  std::vector<std::vector<char>> alive(static_cast<std::size_t>(m) + 1);
  for (int k = 0; k <= m; ++k) alive[k].assign(states[k].size(), k == m ? 1 : 0);
  for (int k = m - 1; k >= 0; --k)
    for (const auto& a : raw[k])
      if (alive[k + 1][a.dst]) alive[k][a.src] = 1;
  if (!alive[0][0]) throw ValidationError("follower problem has no feasible solution");

  Diagram d(DiagramKind::decision, inst.n, m + 1);
  d.set_grouping(grouping);
  std::vector<std::vector<int>> ids(static_cast<std::size_t>(m) + 1);
  for (int k = 0; k <= m; ++k) {
    ids[k].assign(states[k].size(), -1);
    for (std::size_t u = 0; u < states[k].size(); ++u)
      if (alive[k][u]) ids[k][u] = d.add_node(k, states[k][u]);
  }
  d.set_source(ids[0][0]);
  d.set_terminal(ids[m][0]);
  for (int k = 0; k < m; ++k)
    for (const auto& a : raw[k])
      if (alive[k + 1][a.dst]) d.add_arc(ids[k][a.src], ids[k + 1][a.dst], a.items);
  return d;
}

}  // namespace dpprice
