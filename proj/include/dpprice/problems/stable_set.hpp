#pragma once

#include <algorithm>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include "dpprice/core/follower.hpp"

namespace dpprice {

// Maximum-weight stable set follower, solved by branch and bound with a greedy
// clique-cover bound.
class StableSetFollower : public FollowerProblem {
 public:
  explicit StableSetFollower(GraphData graph) : g_(std::move(graph)) {}

  int size() const override { return static_cast<int>(g_.closed_neighborhood.size()); }
  Sense sense() const override { return Sense::maximize; }

  bool is_feasible(const ItemSet& x) const override {
    for (auto [a, b] : g_.edges)
      if (x.test(a) && x.test(b)) return false;
    return true;
  }

  ItemSet solve(std::span<const double> profit, std::span<const double> tiebreak) const override {
    const int n = size();
    Search s{*this, profit, tiebreak, ItemSet(static_cast<std::size_t>(n))};
    ItemSet cand(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
      if (profit[i] >= -kTieTolerance) cand.set(i);
    ItemSet cur(static_cast<std::size_t>(n));
    s.run(cand, cur, 0.0, 0.0);
    ItemSet x = s.best;
    for (int i = 0; i < n; ++i) {
      if (x.test(i) || profit[i] < -kTieTolerance) continue;
      if ((g_.closed_neighborhood[i] & x).none()) x.set(i);
    }
    return x;
  }

  ItemSet sample_solution(Rng& rng) const override {
    const int n = size();
    ItemSet x(static_cast<std::size_t>(n));
    for (int i : rng.permutation(n))
      if ((g_.closed_neighborhood[i] & x).none()) x.set(i);
    return x;
  }

  const GraphData& graph() const { return g_; }

 private:
  struct Search {
    const StableSetFollower& self;
    std::span<const double> profit;
    std::span<const double> tiebreak;
    ItemSet best;
    double best_val = -std::numeric_limits<double>::infinity();
    double best_tb = -std::numeric_limits<double>::infinity();

    double clique_cover_bound(const ItemSet& cand) const {
      std::vector<int> order = to_indices(cand);
      std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return profit[a] > profit[b]; });
      std::vector<ItemSet> cliques;
      double bound = 0;
      for (int v : order) {
        bool placed = false;
        for (auto& c : cliques) {
          if (c.is_subset_of(self.g_.closed_neighborhood[v])) {
            c.set(v);
            placed = true;
            break;
          }
        }
        if (!placed) {
          ItemSet c(cand.size());
          c.set(v);
          cliques.push_back(std::move(c));
          bound += std::max(0.0, profit[v]);
        }
      }
      return bound;
    }

    void run(ItemSet cand, const ItemSet& cur, double val, double tb) {
      if (cand.none()) {
        if (lex_better(val, tb, best_val, best_tb, Sense::maximize)) {
          best = cur;
          best_val = val;
          best_tb = tb;
        }
        return;
      }
      const double ub = val + clique_cover_bound(cand);
      if (ub < best_val - kTieTolerance) return;
      if (ub <= best_val + kTieTolerance) {
        double tb_ub = tb;
        for_each_item(cand, [&](int i) { tb_ub += std::max(0.0, tiebreak[i]); });
        if (tb_ub <= best_tb + kTieTolerance) return;
      }
      int pick = -1;
      for_each_item(cand, [&](int i) {
        if (pick < 0 || profit[i] > profit[pick]) pick = i;
      });
      ItemSet with = cur;
      with.set(pick);
      run(cand - self.g_.closed_neighborhood[pick], with, val + profit[pick], tb + tiebreak[pick]);
      cand.reset(pick);
      run(cand, cur, val, tb);
    }
  };

  GraphData g_;
};

inline ItemSet maxss_best_response(const GraphData& data, std::span<const double> profit,
                                   std::span<const double> tiebreak) {
  return StableSetFollower(data).solve(profit, tiebreak);
}

}  // namespace dpprice
