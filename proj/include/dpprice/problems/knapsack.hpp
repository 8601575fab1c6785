#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "dpprice/core/follower.hpp"

namespace dpprice {

// 0/1 knapsack follower: max profit.x s.t. w.x <= C.
class KnapsackFollower : public FollowerProblem {
 public:
  KnapsackFollower(std::vector<std::int64_t> weights, std::int64_t capacity)
      : w_(std::move(weights)), cap_(capacity) {}

  int size() const override { return static_cast<int>(w_.size()); }
  Sense sense() const override { return Sense::maximize; }

  bool is_feasible(const ItemSet& x) const override {
    std::int64_t s = 0;
    for_each_item(x, [&](int i) { s += w_[i]; });
    return s <= cap_;
  }

  ItemSet solve(std::span<const double> profit, std::span<const double> tiebreak) const override {
    const int n = size();
    const std::int64_t total = std::accumulate(w_.begin(), w_.end(), std::int64_t{0});
    const auto cap = static_cast<std::size_t>(std::clamp<std::int64_t>(cap_, 0, total));
    const std::size_t width = cap + 1;
    // Suffix tables: value/tiebreak of the best subset of items i..n-1 within capacity c.
    std::vector<double> val((static_cast<std::size_t>(n) + 1) * width, 0.0);
    std::vector<double> tb(val.size(), 0.0);
    std::vector<char> take(static_cast<std::size_t>(n) * width, 0);
    for (int i = n - 1; i >= 0; --i) {
      const auto wi = static_cast<std::size_t>(w_[i]);
      const double* nv = &val[(i + 1) * width];
      const double* nt = &tb[(i + 1) * width];
      double* cv = &val[i * width];
      double* ct = &tb[i * width];
      char* tk = &take[i * width];
      const bool usable = profit[i] >= -kTieTolerance;
      for (std::size_t c = 0; c < width; ++c) {
        cv[c] = nv[c];
        ct[c] = nt[c];
        if (!usable || wi > c) continue;
        const double a = profit[i] + nv[c - wi];
        const double b = tiebreak[i] + nt[c - wi];
        if (!lex_better(nv[c], nt[c], a, b, Sense::maximize)) {
          cv[c] = a;
          ct[c] = b;
          tk[c] = 1;
        }
      }
    }
    ItemSet x(static_cast<std::size_t>(n));
    std::size_t c = cap;
    std::int64_t used = 0;
    for (int i = 0; i < n; ++i) {
      if (take[i * width + c]) {
        x.set(i);
        c -= static_cast<std::size_t>(w_[i]);
        used += w_[i];
      }
    }
    for (int i = 0; i < n; ++i) {
      if (x.test(i) || profit[i] < -kTieTolerance || used + w_[i] > cap_) continue;
      x.set(i);
      used += w_[i];
    }
    return x;
  }

  ItemSet sample_solution(Rng& rng) const override {
    const int n = size();
    ItemSet x(static_cast<std::size_t>(n));
    std::int64_t used = 0;
    for (int i : rng.permutation(n)) {
      if (used + w_[i] > cap_) continue;
      x.set(i);
      used += w_[i];
    }
    return x;
  }

  const std::vector<std::int64_t>& weights() const { return w_; }
  std::int64_t capacity() const { return cap_; }

 private:
  std::vector<std::int64_t> w_;
  std::int64_t cap_;
};

inline ItemSet kpp_best_response(const KnapsackData& data, std::span<const double> profit,
                                 std::span<const double> tiebreak) {
  return KnapsackFollower(data.weights, data.capacity).solve(profit, tiebreak);
}

}  // namespace dpprice
