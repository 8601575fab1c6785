#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <tuple>
#include <variant>
#include <vector>

#include "dpprice/core/error.hpp"
#include "dpprice/core/instance.hpp"
#include "dpprice/core/item_set.hpp"
#include "dpprice/core/rng.hpp"

namespace dpprice {

enum class DiagramKind { value_function, selection, decision };

struct SubsetState {
  ItemSet items;
};
struct CapacityState {
  std::int64_t remaining = 0;
};
struct AvailState {
  ItemSet available;
};
struct UncoveredState {
  ItemSet uncovered;
};
struct TerminalState {};

using NodeState = std::variant<SubsetState, CapacityState, AvailState, UncoveredState, TerminalState>;

inline std::string state_label(const NodeState& s) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, SubsetState>) return format_set(v.items);
        if constexpr (std::is_same_v<T, CapacityState>) return std::to_string(v.remaining);
        if constexpr (std::is_same_v<T, AvailState>) return format_set(v.available);
        if constexpr (std::is_same_v<T, UncoveredState>) return format_set(v.uncovered);
        if constexpr (std::is_same_v<T, TerminalState>) return "q";
      },
      s);
}

// Key that identifies a state within a layer.
inline std::string state_key(const NodeState& s) {
  return std::to_string(s.index()) + ":" + state_label(s);
}

struct DiagramNode {
  int id = 0;
  int layer = 0;
  NodeState state;
};

struct DiagramArc {
  int id = 0;
  int src = 0;
  int dst = 0;
  ItemSet items;
};

// Ordered partition J_1..J_m of the items; layer k of a decision diagram sits
// after the decisions on J_1..J_k.
struct GroupPartition {
  std::vector<std::vector<int>> groups;

  int size() const { return static_cast<int>(groups.size()); }

  // Items of groups j+1..k.
  ItemSet items_between(int n, int j, int k) const {
    ItemSet s(static_cast<std::size_t>(n));
    for (int g = j; g < k; ++g)
      for (int i : groups[g]) s.set(i);
    return s;
  }

  bool is_partition(int n) const {
    std::vector<int> seen(static_cast<std::size_t>(n), 0);
    for (const auto& g : groups)
      for (int i : g) {
        if (i < 0 || i >= n || seen[i]) return false;
        seen[i] = 1;
      }
    return std::all_of(seen.begin(), seen.end(), [](int v) { return v == 1; });
  }
};

// One singleton group per item in natural order.
inline GroupPartition identity_grouping(int n) {
  GroupPartition g;
  for (int i = 0; i < n; ++i) g.groups.push_back({i});
  return g;
}

// Random permutation cut into m chunks of size ceil(n/m) or floor(n/m); items
// inside a chunk are kept in index order.
inline GroupPartition make_grouping(int n, int m, Rng& rng) {
  if (m < 1 || m > std::max(n, 1)) throw ConfigError("layer count must be in [1, n]");
  const auto perm = rng.permutation(n);
  GroupPartition g;
  int pos = 0;
  for (int k = 0; k < m; ++k) {
    const int len = n / m + (k < n % m ? 1 : 0);
    std::vector<int> chunk(perm.begin() + pos, perm.begin() + pos + len);
    std::sort(chunk.begin(), chunk.end());
    g.groups.push_back(std::move(chunk));
    pos += len;
  }
  return g;
}

// Layered acyclic multigraph with item-labelled arcs. Nodes are unique per
// (layer, state); arcs are unique per (src, dst, items).
class Diagram {
 public:
  Diagram(DiagramKind kind, int n_items, int layer_count)
      : kind_(kind), n_(n_items), layers_(static_cast<std::size_t>(layer_count)) {}

  DiagramKind kind() const { return kind_; }
  int item_count() const { return n_; }
  int layer_count() const { return static_cast<int>(layers_.size()); }

  int p() const { return p_; }
  int q() const { return q_; }
  void set_source(int id) { p_ = id; }
  void set_terminal(int id) { q_ = id; }

  const std::optional<GroupPartition>& grouping() const { return grouping_; }
  void set_grouping(GroupPartition g) { grouping_ = std::move(g); }

  // Returns the id of the (possibly pre-existing) node.
  int add_node(int layer, NodeState state) {
    if (layer < 0 || layer >= layer_count()) throw ValidationError("node layer out of range");
    const auto key = std::make_pair(layer, state_key(state));
    if (auto it = index_.find(key); it != index_.end()) return it->second;
    const int id = static_cast<int>(nodes_.size());
    nodes_.push_back({id, layer, std::move(state)});
    layers_[layer].push_back(id);
    out_.emplace_back();
    in_.emplace_back();
    index_.emplace(key, id);
    return id;
  }

  std::optional<int> find_node(int layer, const NodeState& state) const {
    auto it = index_.find({layer, state_key(state)});
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  // Returns the new arc id, or nullopt when an identical arc exists.
  std::optional<int> add_arc(int src, int dst, ItemSet items) {
    if (nodes_.at(src).layer >= nodes_.at(dst).layer) throw ValidationError("arc must go to a later layer");
    std::string bits;
    boost::to_string(items, bits);
    if (!arc_index_.emplace(src, dst, bits).second) return std::nullopt;
    const int id = static_cast<int>(arcs_.size());
    arcs_.push_back({id, src, dst, std::move(items)});
    out_[src].push_back(id);
    in_[dst].push_back(id);
    return id;
  }

  bool has_arc(int src, int dst, const ItemSet& items) const {
    std::string bits;
    boost::to_string(items, bits);
    return arc_index_.count({src, dst, bits}) > 0;
  }

  const std::vector<DiagramNode>& nodes() const { return nodes_; }
  const std::vector<DiagramArc>& arcs() const { return arcs_; }
  const DiagramNode& node(int id) const { return nodes_.at(id); }
  const DiagramArc& arc(int id) const { return arcs_.at(id); }
  const std::vector<int>& layer(int k) const { return layers_.at(k); }
  const std::vector<int>& out_arcs(int node) const { return out_.at(node); }
  const std::vector<int>& in_arcs(int node) const { return in_.at(node); }

  // Node ids ordered by (layer, id), a topological order.
  std::vector<int> topological_order() const {
    std::vector<int> order;
    for (const auto& l : layers_) order.insert(order.end(), l.begin(), l.end());
    return order;
  }

 private:
  DiagramKind kind_;
  int n_;
  int p_ = -1;
  int q_ = -1;
  std::optional<GroupPartition> grouping_;
  std::vector<DiagramNode> nodes_;
  std::vector<DiagramArc> arcs_;
  std::vector<std::vector<int>> layers_;
  std::vector<std::vector<int>> out_;
  std::vector<std::vector<int>> in_;
  std::map<std::pair<int, std::string>, int> index_;
  std::set<std::tuple<int, int, std::string>> arc_index_;
};

inline double arc_length(const DiagramArc& arc, std::span<const double> objective) {
  double s = 0;
  for_each_item(arc.items, [&](int i) { s += objective[i]; });
  return s;
}

struct DiagramPath {
  double value = 0;
  std::vector<int> arcs;
};

// Longest (maximize) or shortest (minimize) p-q path under per-item arc
// lengths `objective` (see follower_objective).
inline DiagramPath diagram_longest_path(const Diagram& d, std::span<const double> objective, Sense sense) {
  const double worst = sense == Sense::maximize ? -std::numeric_limits<double>::infinity()
                                                : std::numeric_limits<double>::infinity();
  std::vector<double> best(d.nodes().size(), worst);
  std::vector<int> via(d.nodes().size(), -1);
  best[d.q()] = 0;
  auto order = d.topological_order();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const int u = *it;
    if (u == d.q()) continue;
    for (int a : d.out_arcs(u)) {
      const auto& arc = d.arc(a);
      if (best[arc.dst] == worst) continue;
      const double val = arc_length(arc, objective) + best[arc.dst];
      if (via[u] < 0 || (sense == Sense::maximize ? val > best[u] : val < best[u])) {
        best[u] = val;
        via[u] = a;
      }
    }
  }
  if (d.p() == d.q() || via[d.p()] < 0) throw ValidationError("no terminal path");
  DiagramPath path;
  path.value = best[d.p()];
  for (int u = d.p(); u != d.q(); u = d.arc(via[u]).dst) path.arcs.push_back(via[u]);
  return path;
}

// Union of arc items along a path.
inline ItemSet path_items(const Diagram& d, const std::vector<int>& arcs) {
  ItemSet s(static_cast<std::size_t>(d.item_count()));
  for (int a : arcs) s |= d.arc(a).items;
  return s;
}

// Two-node diagram of the value function reformulation.
inline Diagram vf_diagram(int n) {
  Diagram d(DiagramKind::value_function, n, 2);
  d.set_source(d.add_node(0, SubsetState{ItemSet(static_cast<std::size_t>(n))}));
  d.set_terminal(d.add_node(1, TerminalState{}));
  return d;
}

inline std::optional<int> vf_add_solution(Diagram& d, const ItemSet& x) { return d.add_arc(d.p(), d.q(), x); }

}  // namespace dpprice
