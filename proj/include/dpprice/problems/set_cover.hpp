#pragma once

#include <algorithm>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "dpprice/core/follower.hpp"

namespace dpprice {

// Minimum-cost cover of `target` using only the items in `allowed`; ties favour
// larger tiebreak. Branches on the uncovered element with the fewest candidate
// sets; the bound charges each uncovered element its cheapest per-element share.
// Ties are only resolved exactly when zero-cost sets carry zero tiebreak, which
// holds for costs v + t with tiebreak t.
inline std::optional<ItemSet> min_cost_cover(const SetCoverData& data, const ItemSet& target,
                                             const ItemSet& allowed, std::span<const double> cost,
                                             std::span<const double> tiebreak) {
  const int n = static_cast<int>(data.sets.size());
  const auto ne = static_cast<std::size_t>(data.num_elements);
  std::vector<std::vector<int>> covering(ne);
  for (int i = 0; i < n; ++i)
    if (allowed.test(i)) for_each_item(data.sets[i], [&](int e) { covering[e].push_back(i); });

  struct State {
    ItemSet best;
    bool found = false;
    double best_val = std::numeric_limits<double>::infinity();
    double best_tb = -std::numeric_limits<double>::infinity();
  } st;

  auto rec = [&](auto&& self, const ItemSet& uncovered, ItemSet avail, const ItemSet& chosen, double val,
                 double tb) -> void {
    if (uncovered.none()) {
      if (!st.found || lex_better(val, tb, st.best_val, st.best_tb, Sense::minimize)) {
        st.best = chosen;
        st.found = true;
        st.best_val = val;
        st.best_tb = tb;
      }
      return;
    }
    double lb = val;
    int branch_elem = -1;
    std::size_t branch_count = 0;
    bool dead = false;
    for_each_item(uncovered, [&](int e) {
      if (dead) return;
      double share = std::numeric_limits<double>::infinity();
      std::size_t count = 0;
      for (int s : covering[e]) {
        if (!avail.test(s)) continue;
        ++count;
        const auto k = static_cast<double>((data.sets[s] & uncovered).count());
        share = std::min(share, std::max(0.0, cost[s]) / k);
      }
      if (count == 0) {
        dead = true;
        return;
      }
      lb += share;
      if (branch_elem < 0 || count < branch_count) {
        branch_elem = e;
        branch_count = count;
      }
    });
    if (dead) return;
    if (st.found) {
      if (lb > st.best_val + kTieTolerance) return;
      if (lb >= st.best_val - kTieTolerance) {
        double tb_ub = tb;
        for_each_item(avail, [&](int s) { tb_ub += std::max(0.0, tiebreak[s]); });
        if (tb_ub <= st.best_tb + kTieTolerance) return;
      }
    }
    std::vector<int> options;
    for (int s : covering[branch_elem])
      if (avail.test(s)) options.push_back(s);
    std::stable_sort(options.begin(), options.end(), [&](int a, int b) { return cost[a] < cost[b]; });
    for (int s : options) {
      avail.reset(s);
      ItemSet next = chosen;
      next.set(s);
      self(self, uncovered - data.sets[s], avail, next, val + cost[s], tb + tiebreak[s]);
    }
  };

  ItemSet start(static_cast<std::size_t>(n));
  rec(rec, target, allowed, start, 0.0, 0.0);
  if (!st.found) return std::nullopt;

  ItemSet x = st.best;
  for (int i = n - 1; i >= 0; --i) {
    if (!x.test(i) || cost[i] > kTieTolerance || tiebreak[i] > kTieTolerance) continue;
    ItemSet covered(ne);
    for_each_item(x, [&](int j) {
      if (j != i) covered |= data.sets[j];
    });
    if (target.is_subset_of(covered)) x.reset(i);
  }
  return x;
}

class SetCoverFollower : public FollowerProblem {
 public:
  explicit SetCoverFollower(SetCoverData data) : d_(std::move(data)) {}

  int size() const override { return static_cast<int>(d_.sets.size()); }
  Sense sense() const override { return Sense::minimize; }

  bool is_feasible(const ItemSet& x) const override { return covered_by(x).all(); }

  ItemSet solve(std::span<const double> cost, std::span<const double> tiebreak) const override {
    auto x = min_cost_cover(d_, full_set(static_cast<std::size_t>(d_.num_elements)),
                            full_set(static_cast<std::size_t>(size())), cost, tiebreak);
    if (!x) throw FollowerInfeasible("set family does not cover all elements");
    return *x;
  }

  ItemSet sample_solution(Rng& rng) const override {
    const int n = size();
    ItemSet x(static_cast<std::size_t>(n));
    ItemSet uncovered = full_set(static_cast<std::size_t>(d_.num_elements));
    for (int i : rng.permutation(n)) {
      if (uncovered.none()) break;
      if ((d_.sets[i] & uncovered).none()) continue;
      x.set(i);
      uncovered -= d_.sets[i];
    }
    if (uncovered.any()) throw FollowerInfeasible("set family does not cover all elements");
    for (int i : rng.permutation(n)) {
      if (!x.test(i)) continue;
      x.reset(i);
      if (!covered_by(x).all()) x.set(i);
    }
    return x;
  }

  ItemSet covered_by(const ItemSet& x) const {
    ItemSet c(static_cast<std::size_t>(d_.num_elements));
    for_each_item(x, [&](int i) { c |= d_.sets[i]; });
    return c;
  }

  const SetCoverData& data() const { return d_; }

 private:
  SetCoverData d_;
};

inline ItemSet minsc_best_response(const SetCoverData& data, std::span<const double> cost,
                                   std::span<const double> tiebreak) {
  return SetCoverFollower(data).solve(cost, tiebreak);
}

}  // namespace dpprice
