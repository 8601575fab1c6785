#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "dpprice/core/error.hpp"
#include "dpprice/core/item_set.hpp"

namespace dpprice {

enum class ProblemKind { kpp, maxsspp, minscpp, kip };
enum class Sense { maximize, minimize };

inline const char* problem_name(ProblemKind k) {
  switch (k) {
    case ProblemKind::kpp: return "kpp";
    case ProblemKind::maxsspp: return "maxsspp";
    case ProblemKind::minscpp: return "minscpp";
    case ProblemKind::kip: return "kip";
  }
  return "?";
}

inline ProblemKind parse_problem(const std::string& s) {
  if (s == "kpp") return ProblemKind::kpp;
  if (s == "maxsspp") return ProblemKind::maxsspp;
  if (s == "minscpp") return ProblemKind::minscpp;
  if (s == "kip") return ProblemKind::kip;
  throw ValidationError("unknown problem kind: " + s);
}

struct KnapsackData {
  std::vector<std::int64_t> weights;
  std::int64_t capacity = 0;
};

struct GraphData {
  std::vector<std::pair<int, int>> edges;
  std::vector<ItemSet> closed_neighborhood;

  static GraphData from_edges(int n, std::vector<std::pair<int, int>> edges) {
    GraphData g;
    for (auto& [a, b] : edges) {
      if (a == b || a < 0 || b < 0 || a >= n || b >= n)
        throw ValidationError("invalid edge");
      if (a > b) std::swap(a, b);
    }
    std::sort(edges.begin(), edges.end());
    if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
      throw ValidationError("duplicate edge");
    g.closed_neighborhood.assign(static_cast<std::size_t>(n), ItemSet(static_cast<std::size_t>(n)));
    for (int i = 0; i < n; ++i) g.closed_neighborhood[i].set(i);
    for (auto [a, b] : edges) {
      g.closed_neighborhood[a].set(b);
      g.closed_neighborhood[b].set(a);
    }
    g.edges = std::move(edges);
    return g;
  }

  bool adjacent(int a, int b) const { return a != b && closed_neighborhood[a].test(b); }
};

struct SetCoverData {
  int num_elements = 0;
  std::vector<ItemSet> sets;            // one bitset over the elements per item
  std::vector<double> element_weights;  // generator provenance, may be empty
};

struct KipData {
  std::vector<std::int64_t> weights;
  std::int64_t capacity = 0;
  std::vector<std::int64_t> leader_weights;
  std::int64_t leader_capacity = 0;
};

using Payload = std::variant<KnapsackData, GraphData, SetCoverData, KipData>;

struct PricingInstance {
  int n = 0;
  std::vector<std::int64_t> values;
  ItemSet tolled;
  Payload payload;

  ProblemKind kind() const { return static_cast<ProblemKind>(payload.index()); }
  Sense sense() const { return kind() == ProblemKind::minscpp ? Sense::minimize : Sense::maximize; }
  ItemSet tollfree() const { return ~tolled; }
  bool is_tolled(int i) const { return tolled.test(static_cast<std::size_t>(i)); }

  const KnapsackData& knapsack() const { return std::get<KnapsackData>(payload); }
  const GraphData& graph() const { return std::get<GraphData>(payload); }
  const SetCoverData& set_cover() const { return std::get<SetCoverData>(payload); }
  const KipData& kip() const { return std::get<KipData>(payload); }

  std::int64_t value_of(const ItemSet& x) const {
    std::int64_t s = 0;
    for_each_item(x, [&](int i) { s += values[i]; });
    return s;
  }

  void validate() const;
};

inline void PricingInstance::validate() const {
  const auto un = static_cast<std::size_t>(n);
  if (n < 1) throw ValidationError("instance needs at least one item");
  if (values.size() != un) throw ValidationError("value vector length differs from n");
  if (tolled.size() != un) throw ValidationError("tolled set length differs from n");
  for (auto v : values)
    if (v < 0) throw ValidationError("negative base value");
  auto check_weights = [&](const std::vector<std::int64_t>& w, std::int64_t cap, const char* what) {
    if (w.size() != un) throw ValidationError(std::string(what) + " length differs from n");
    for (auto x : w)
      if (x < 0) throw ValidationError(std::string("negative ") + what);
    if (cap < 0) throw ValidationError("negative capacity");
  };
  switch (kind()) {
    case ProblemKind::kpp: {
      const auto& d = knapsack();
      check_weights(d.weights, d.capacity, "weights");
      break;
    }
    case ProblemKind::maxsspp: {
      const auto& g = graph();
      if (g.closed_neighborhood.size() != un) throw ValidationError("graph size differs from n");
      for (auto [a, b] : g.edges)
        if (a < 0 || b < 0 || a >= n || b >= n || a == b) throw ValidationError("invalid edge");
      break;
    }
    case ProblemKind::minscpp: {
      const auto& d = set_cover();
      if (d.sets.size() != un) throw ValidationError("set family size differs from n");
      if (d.num_elements < 0) throw ValidationError("negative element count");
      ItemSet all(static_cast<std::size_t>(d.num_elements));
      ItemSet free_cover(static_cast<std::size_t>(d.num_elements));
      for (int i = 0; i < n; ++i) {
        if (d.sets[i].size() != static_cast<std::size_t>(d.num_elements))
          throw ValidationError("set bitset length differs from element count");
        all |= d.sets[i];
        if (!is_tolled(i)) free_cover |= d.sets[i];
      }
      if (!all.all()) throw ValidationError("sets do not cover all elements");
      if (!free_cover.all()) throw ValidationError("toll-free sets do not cover all elements");
      if (!d.element_weights.empty() &&
          d.element_weights.size() != static_cast<std::size_t>(d.num_elements))
        throw ValidationError("element weight length differs from element count");
      break;
    }
    case ProblemKind::kip: {
      const auto& d = kip();
      check_weights(d.weights, d.capacity, "weights");
      check_weights(d.leader_weights, d.leader_capacity, "leader weights");
      if (tolled.count() != un) throw ValidationError("every KIP item must be interdictable");
      break;
    }
  }
}

inline PricingInstance make_kpp(std::vector<std::int64_t> values, const std::vector<int>& tolled,
                                std::vector<std::int64_t> weights, std::int64_t capacity) {
  PricingInstance inst;
  inst.n = static_cast<int>(values.size());
  inst.values = std::move(values);
  inst.tolled = make_set(static_cast<std::size_t>(inst.n), tolled);
  inst.payload = KnapsackData{std::move(weights), capacity};
  inst.validate();
  return inst;
}

inline PricingInstance make_maxsspp(std::vector<std::int64_t> values, const std::vector<int>& tolled,
                                    std::vector<std::pair<int, int>> edges) {
  PricingInstance inst;
  inst.n = static_cast<int>(values.size());
  inst.values = std::move(values);
  inst.tolled = make_set(static_cast<std::size_t>(inst.n), tolled);
  inst.payload = GraphData::from_edges(inst.n, std::move(edges));
  inst.validate();
  return inst;
}

// sets[i] lists the elements covered by item i.
inline PricingInstance make_minscpp(std::vector<std::int64_t> values, const std::vector<int>& tolled,
                                    int num_elements, const std::vector<std::vector<int>>& sets) {
  PricingInstance inst;
  inst.n = static_cast<int>(values.size());
  inst.values = std::move(values);
  inst.tolled = make_set(static_cast<std::size_t>(inst.n), tolled);
  SetCoverData d;
  d.num_elements = num_elements;
  for (const auto& s : sets) d.sets.push_back(make_set(static_cast<std::size_t>(num_elements), s));
  inst.payload = std::move(d);
  inst.validate();
  return inst;
}

inline PricingInstance make_kip(std::vector<std::int64_t> values, std::vector<std::int64_t> weights,
                                std::int64_t capacity, std::vector<std::int64_t> leader_weights,
                                std::int64_t leader_capacity) {
  PricingInstance inst;
  inst.n = static_cast<int>(values.size());
  inst.values = std::move(values);
  inst.tolled = full_set(static_cast<std::size_t>(inst.n));
  inst.payload = KipData{std::move(weights), capacity, std::move(leader_weights), leader_capacity};
  inst.validate();
  return inst;
}

// Per-item nonnegative toll, zero on toll-free items. For KIP the entries are
// the 0/1 interdiction decisions.
class TollVector {
 public:
  TollVector() = default;

  TollVector(const PricingInstance& inst, std::vector<double> t, double tol = 1e-9) : t_(std::move(t)) {
    if (t_.size() != static_cast<std::size_t>(inst.n)) throw ValidationError("toll vector length differs from n");
    for (int i = 0; i < inst.n; ++i) {
      if (t_[i] < -tol) throw ValidationError("negative toll");
      if (!inst.is_tolled(i) && std::abs(t_[i]) > tol) throw ValidationError("toll on a toll-free item");
      if (t_[i] < 0 || !inst.is_tolled(i)) t_[i] = 0;
    }
  }

  static TollVector zero(const PricingInstance& inst) {
    TollVector t;
    t.t_.assign(static_cast<std::size_t>(inst.n), 0.0);
    return t;
  }

  double operator[](int i) const { return t_[static_cast<std::size_t>(i)]; }
  std::span<const double> values() const { return t_; }
  int size() const { return static_cast<int>(t_.size()); }

  double dot(const ItemSet& x) const {
    double s = 0;
    for_each_item(x, [&](int i) { s += t_[i]; });
    return s;
  }

 private:
  std::vector<double> t_;
};

}  // namespace dpprice
