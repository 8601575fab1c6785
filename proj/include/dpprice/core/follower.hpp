#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "dpprice/core/error.hpp"
#include "dpprice/core/instance.hpp"
#include "dpprice/core/item_set.hpp"
#include "dpprice/core/rng.hpp"

namespace dpprice {

// Follower values closer than this are treated as ties and resolved in favour
// of the tiebreak objective.
inline constexpr double kTieTolerance = 1e-9;

// Lexicographic (value, tiebreak) comparison: true when (a, ta) beats (b, tb).
inline bool lex_better(double a, double ta, double b, double tb, Sense sense) {
  if (sense == Sense::maximize) {
    if (a > b + kTieTolerance) return true;
    if (a < b - kTieTolerance) return false;
  } else {
    if (a < b - kTieTolerance) return true;
    if (a > b + kTieTolerance) return false;
  }
  return ta > tb + kTieTolerance;
}

class FollowerProblem {
 public:
  virtual ~FollowerProblem() = default;

  virtual int size() const = 0;
  virtual Sense sense() const = 0;
  virtual bool is_monotone() const { return true; }
  virtual bool is_feasible(const ItemSet& x) const = 0;

  // Optimizes objective.x in the problem's sense; among optima (within the tie
  // tolerance) maximizes tiebreak.x. The result is maximal (resp. minimal)
  // when the problem is monotone.
  virtual ItemSet solve(std::span<const double> objective, std::span<const double> tiebreak) const = 0;

  // Random maximal (resp. minimal) feasible solution.
  virtual ItemSet sample_solution(Rng& rng) const = 0;

  // All feasible solutions by exhaustive enumeration.
  std::vector<ItemSet> enumerate_solutions(std::size_t max_count) const {
    const int n = size();
    if (n > 24) throw OracleTooLarge("too many items to enumerate follower solutions");
    std::vector<ItemSet> out;
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n); ++bits) {
      ItemSet x = mask_from_bits(static_cast<std::size_t>(n), bits);
      if (!is_feasible(x)) continue;
      if (out.size() >= max_count) throw OracleTooLarge("follower solution count exceeds cap");
      out.push_back(std::move(x));
    }
    return out;
  }

  // Inclusion-maximal (maximize sense) or inclusion-minimal (minimize sense)
  // feasible solutions; all feasible solutions when not monotone.
  std::vector<ItemSet> enumerate_extremal(std::size_t max_count) const {
    auto all = enumerate_solutions(max_count);
    if (!is_monotone()) return all;
    std::vector<ItemSet> out;
    for (const auto& x : all) {
      bool extremal = true;
      for (int i = 0; i < size() && extremal; ++i) {
        ItemSet y = x;
        if (sense() == Sense::maximize) {
          if (x.test(i)) continue;
          y.set(i);
        } else {
          if (!x.test(i)) continue;
          y.reset(i);
        }
        if (is_feasible(y)) extremal = false;
      }
      if (extremal) out.push_back(x);
    }
    return out;
  }

  double evaluate(std::span<const double> objective, const ItemSet& x) const {
    double s = 0;
    for_each_item(x, [&](int i) { s += objective[i]; });
    return s;
  }
};

// Post-toll follower objective: v - t (maximize) or v + t (minimize).
inline std::vector<double> follower_objective(const PricingInstance& inst, const TollVector& t) {
  std::vector<double> c(static_cast<std::size_t>(inst.n));
  for (int i = 0; i < inst.n; ++i) {
    const auto v = static_cast<double>(inst.values[i]);
    if (inst.kind() == ProblemKind::kip)
      c[i] = v - v * t[i];
    else
      c[i] = inst.sense() == Sense::maximize ? v - t[i] : v + t[i];
  }
  return c;
}

struct BestResponse {
  ItemSet x;
  double follower_value = 0;
  double leader_revenue = 0;
};

// Follower response under the optimistic assumption: ties favour leader revenue.
inline BestResponse optimistic_best_response(const FollowerProblem& problem, const PricingInstance& inst,
                                             const TollVector& t) {
  const auto obj = follower_objective(inst, t);
  std::vector<double> tiebreak(t.values().begin(), t.values().end());
  if (inst.kind() == ProblemKind::kip) tiebreak.assign(tiebreak.size(), 0.0);
  BestResponse r;
  r.x = problem.solve(obj, tiebreak);
  r.follower_value = problem.evaluate(obj, r.x);
  r.leader_revenue = inst.kind() == ProblemKind::kip ? r.follower_value : t.dot(r.x);
  return r;
}

}  // namespace dpprice
