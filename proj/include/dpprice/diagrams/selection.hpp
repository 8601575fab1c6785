#pragma once

#include <optional>
#include <set>
#include <vector>

#include "dpprice/core/follower.hpp"
#include "dpprice/diagrams/diagram.hpp"

namespace dpprice {

// Initial selection diagram: layers {empty set}, singletons, pairs, {q}. Each of
// the N samples contributes one random pair of a sampled solution. Samples
// with fewer than two items contribute their singleton only.
inline Diagram sd_init(const FollowerProblem& problem, int N, Rng& rng) {
  if (N < 0) throw ConfigError("pair count must be nonnegative");
  const int n = problem.size();
  const auto un = static_cast<std::size_t>(n);
  Diagram d(DiagramKind::selection, n, 4);
  d.set_source(d.add_node(0, SubsetState{ItemSet(un)}));
  d.set_terminal(d.add_node(3, TerminalState{}));
  std::vector<int> singles, pairs;
  auto add_single = [&](int i) {
    const auto before = d.nodes().size();
    const int id = d.add_node(1, SubsetState{make_set(un, {i})});
    if (d.nodes().size() > before) singles.push_back(id);
  };
  for (int k = 0; k < N; ++k) {
    const auto items = to_indices(problem.sample_solution(rng));
    if (items.size() >= 2) {
      const auto a = rng.below(items.size());
      auto b = rng.below(items.size() - 1);
      if (b >= a) ++b;
      const int i = std::min(items[a], items[b]), j = std::max(items[a], items[b]);
      add_single(i);
      add_single(j);
      const auto before = d.nodes().size();
      const int id = d.add_node(2, SubsetState{make_set(un, {i, j})});
      if (d.nodes().size() > before) pairs.push_back(id);
    } else if (items.size() == 1) {
      add_single(items[0]);
    }
  }
  for (int s : singles) d.add_arc(d.p(), s, std::get<SubsetState>(d.node(s).state).items);
  for (int pr : pairs) {
    const auto& K = std::get<SubsetState>(d.node(pr).state).items;
    for (int s : singles) {
      const auto& J = std::get<SubsetState>(d.node(s).state).items;
      if (J.is_subset_of(K)) d.add_arc(s, pr, K - J);
    }
  }
  return d;
}

// Connects the deepest node J contained in x to q with items x \ J, scanning
// pairs, then singletons, then the empty set, each layer in random order.
// Returns nullopt when the chosen arc already exists.
inline std::optional<int> sd_add_solution(Diagram& d, const ItemSet& x, Rng& rng) {
  for (int k = 2; k >= 0; --k) {
    auto ids = d.layer(k);
    rng.shuffle(ids);
    for (int id : ids) {
      const auto& J = std::get<SubsetState>(d.node(id).state).items;
      if (J.is_subset_of(x)) return d.add_arc(id, d.q(), x - J);
    }
  }
  throw ValidationError("selection diagram has no source node");
}

// Complete selection diagram: every subset of an extremal solution, layered by
// cardinality, with terminal arcs from the extremal solutions themselves.
inline Diagram sd_full(const FollowerProblem& problem, std::size_t max_nodes = 200000) {
  const int n = problem.size();
  const auto un = static_cast<std::size_t>(n);
  const auto sols = problem.enumerate_extremal(max_nodes);
  std::set<ItemSet, ItemSetLess> subsets;
  std::size_t depth = 0;
  for (const auto& x : sols) {
    depth = std::max(depth, x.count());
    const auto items = to_indices(x);
    if (items.size() > 24) throw SizeLimitExceeded("selection diagram too large");
    for (std::uint64_t b = 0; b < (std::uint64_t{1} << items.size()); ++b) {
      ItemSet s(un);
      for (std::size_t k = 0; k < items.size(); ++k)
        if (b >> k & 1U) s.set(items[k]);
      subsets.insert(std::move(s));
      if (subsets.size() > max_nodes) throw SizeLimitExceeded("selection diagram too large");
    }
  }
  Diagram d(DiagramKind::selection, n, static_cast<int>(depth) + 2);
  std::vector<std::vector<ItemSet>> by_size(depth + 1);
  for (const auto& s : subsets) by_size[s.count()].push_back(s);
  for (std::size_t k = 0; k <= depth; ++k)
    for (const auto& s : by_size[k]) d.add_node(static_cast<int>(k), SubsetState{s});
  d.set_source(*d.find_node(0, SubsetState{ItemSet(un)}));
  d.set_terminal(d.add_node(static_cast<int>(depth) + 1, TerminalState{}));
  for (std::size_t k = 1; k <= depth; ++k) {
    for (int id : d.layer(static_cast<int>(k))) {
      const auto K = std::get<SubsetState>(d.node(id).state).items;
      for_each_item(K, [&](int i) {
        ItemSet J = K;
        J.reset(i);
        if (auto src = d.find_node(static_cast<int>(k) - 1, SubsetState{J})) d.add_arc(*src, id, make_set(un, {i}));
      });
    }
  }
  for (const auto& x : sols) d.add_arc(*d.find_node(static_cast<int>(x.count()), SubsetState{x}), d.q(), ItemSet(un));
  return d;
}

}  // namespace dpprice
