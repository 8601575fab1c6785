#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <vector>

#include <gmpxx.h>

#include "dpprice/core/error.hpp"
#include "dpprice/core/instance.hpp"
#include "dpprice/core/rational_lp.hpp"
#include "dpprice/core/result.hpp"

// Brute-force bilevel oracles. They share no code with the follower solvers,
// the diagrams or the MILP engine so they can serve as ground truth.

namespace dpprice {

struct OracleLimits {
  int max_items = 20;
  std::size_t max_solutions = std::size_t{1} << 20;
};

namespace oracle_detail {

inline bool feasible_bits(const PricingInstance& inst, std::uint64_t bits) {
  switch (inst.kind()) {
    case ProblemKind::kpp:
    case ProblemKind::kip: {
      const auto& w = inst.kind() == ProblemKind::kpp ? inst.knapsack().weights : inst.kip().weights;
      const auto cap = inst.kind() == ProblemKind::kpp ? inst.knapsack().capacity : inst.kip().capacity;
      std::int64_t s = 0;
      for (int i = 0; i < inst.n; ++i)
        if (bits >> i & 1U) s += w[i];
      return s <= cap;
    }
    case ProblemKind::maxsspp:
      for (auto [a, b] : inst.graph().edges)
        if ((bits >> a & 1U) && (bits >> b & 1U)) return false;
      return true;
    case ProblemKind::minscpp: {
      const auto& d = inst.set_cover();
      ItemSet covered(static_cast<std::size_t>(d.num_elements));
      for (int i = 0; i < inst.n; ++i)
        if (bits >> i & 1U) covered |= d.sets[i];
      return covered.all();
    }
  }
  return false;
}

// Inclusion-maximal (maximize) or inclusion-minimal (minimize) feasible sets.
inline std::vector<std::uint64_t> extremal_solutions(const PricingInstance& inst, const OracleLimits& lim) {
  if (inst.n > lim.max_items) throw OracleTooLarge("instance too large for oracle");
  const std::uint64_t total = std::uint64_t{1} << inst.n;
  std::vector<char> feas(total);
  std::size_t count = 0;
  for (std::uint64_t b = 0; b < total; ++b) {
    feas[b] = feasible_bits(inst, b) ? 1 : 0;
    count += feas[b];
    if (count > lim.max_solutions) throw OracleTooLarge("instance too large for oracle");
  }
  const bool maximize = inst.sense() == Sense::maximize;
  std::vector<std::uint64_t> out;
  for (std::uint64_t b = 0; b < total; ++b) {
    if (!feas[b]) continue;
    bool extremal = true;
    for (int i = 0; i < inst.n && extremal; ++i) {
      const std::uint64_t bit = std::uint64_t{1} << i;
      if (maximize && !(b & bit) && feas[b | bit]) extremal = false;
      if (!maximize && (b & bit) && feas[b & ~bit]) extremal = false;
    }
    if (extremal) out.push_back(b);
  }
  return out;
}

inline std::int64_t value_bits(const PricingInstance& inst, std::uint64_t bits) {
  std::int64_t s = 0;
  for (int i = 0; i < inst.n; ++i)
    if (bits >> i & 1U) s += inst.values[i];
  return s;
}

inline std::uint64_t tolled_bits(const PricingInstance& inst) {
  std::uint64_t b = 0;
  for (int i = 0; i < inst.n; ++i)
    if (inst.is_tolled(i)) b |= std::uint64_t{1} << i;
  return b;
}

}  // namespace oracle_detail

// Exact optimum of the pricing problem by enumeration of follower responses.
// For every extremal candidate response x, the tolls on tolled items outside x
// are fixed at their deterrence level (t_i = v_i when maximizing, unbounded
// when minimizing) and one exact LP maximizes the revenue on x subject to x
// dominating every other extremal response and t_i <= M_i.
inline SolveResult brute_force_cpp(const PricingInstance& inst, std::span<const double> M,
                                   const OracleLimits& lim = {}) {
  using namespace oracle_detail;
  if (inst.kind() == ProblemKind::kip) throw ConfigError("brute_force_cpp does not handle KIP");
  const auto sols = extremal_solutions(inst, lim);
  if (sols.empty()) throw FollowerInfeasible("follower has no feasible solution");
  const bool maximize = inst.sense() == Sense::maximize;
  const std::uint64_t tolled = tolled_bits(inst);

  SolveResult best;
  best.status = SolveStatus::optimal;
  best.tolls = TollVector::zero(inst);
  {
    std::uint64_t pick = sols.front();
    for (auto s : sols) {
      const auto a = value_bits(inst, s), b = value_bits(inst, pick);
      if (maximize ? a > b : a < b) pick = s;
    }
    best.response = mask_from_bits(static_cast<std::size_t>(inst.n), pick);
  }
  mpq_class best_value = 0;

  for (const auto x : sols) {
    const std::uint64_t S = x & tolled;
    if (S == 0) continue;
    std::vector<int> vars;
    mpq_class ub = 0;
    for (int i = 0; i < inst.n; ++i)
      if (S >> i & 1U) {
        vars.push_back(i);
        ub += mpq_class(M[i]);
      }
    if (ub <= best_value) continue;

    const std::int64_t vx = value_bits(inst, x);
    std::map<std::uint64_t, std::int64_t> rows;
    bool infeasible = false;
    for (const auto y : sols) {
      if (y == x) continue;
      std::int64_t rhs;
      if (maximize) {
        rhs = vx - value_bits(inst, y) + value_bits(inst, (y & ~x) & tolled);
      } else {
        if ((y & ~x) & tolled) continue;
        rhs = value_bits(inst, y) - vx;
      }
      const std::uint64_t support = S & ~y;
      if (support == 0) {
        if (rhs < 0) infeasible = true;
        continue;
      }
      auto it = rows.find(support);
      if (it == rows.end())
        rows.emplace(support, rhs);
      else
        it->second = std::min(it->second, rhs);
    }
    if (infeasible) continue;

    std::vector<std::vector<mpq_class>> A;
    std::vector<mpq_class> b;
    for (const auto& [support, rhs] : rows) {
      std::vector<mpq_class> row(vars.size(), 0);
      for (std::size_t k = 0; k < vars.size(); ++k)
        if (support >> vars[k] & 1U) row[k] = 1;
      A.push_back(std::move(row));
      b.emplace_back(rhs);
    }
    for (std::size_t k = 0; k < vars.size(); ++k) {
      std::vector<mpq_class> row(vars.size(), 0);
      row[k] = 1;
      A.push_back(std::move(row));
      b.emplace_back(M[vars[k]]);
    }
    const std::vector<mpq_class> c(vars.size(), 1);
    const auto lp = solve_rational_lp(A, b, c);
    if (lp.status != RationalLpResult::Status::optimal || lp.value <= best_value) continue;

    best_value = lp.value;
    std::vector<double> t(static_cast<std::size_t>(inst.n), 0.0);
    double paid = 0;
    for (std::size_t k = 0; k < vars.size(); ++k) {
      t[vars[k]] = lp.x[k].get_d();
      paid += t[vars[k]];
    }
    double total_value = 0;
    for (auto v : inst.values) total_value += static_cast<double>(v);
    for (int i = 0; i < inst.n; ++i) {
      if (!(tolled >> i & 1U) || (x >> i & 1U)) continue;
      t[i] = maximize ? static_cast<double>(inst.values[i]) : total_value + paid + 1;
    }
    best.tolls = TollVector(inst, std::move(t));
    best.response = mask_from_bits(static_cast<std::size_t>(inst.n), x);
  }
  best.revenue = best_value.get_d();
  best.bound = best.revenue;
  best.gap = 0;
  return best;
}

// Exact knapsack interdiction optimum: every maximal interdiction within the
// leader budget, inner knapsack by a capacity DP.
inline SolveResult brute_force_kip(const PricingInstance& inst, int max_items = 20) {
  if (inst.kind() != ProblemKind::kip) throw ConfigError("brute_force_kip needs a KIP instance");
  if (inst.n > max_items) throw OracleTooLarge("instance too large for oracle");
  const auto& d = inst.kip();
  const int n = inst.n;
  const auto cap = static_cast<std::size_t>(std::max<std::int64_t>(0, d.capacity));

  auto inner = [&](std::uint64_t blocked, std::uint64_t* chosen) {
    std::vector<std::vector<std::int64_t>> table(static_cast<std::size_t>(n) + 1,
                                                 std::vector<std::int64_t>(cap + 1, 0));
    for (int i = n - 1; i >= 0; --i) {
      const auto wi = static_cast<std::size_t>(d.weights[i]);
      for (std::size_t c = 0; c <= cap; ++c) {
        auto v = table[i + 1][c];
        if (!(blocked >> i & 1U) && wi <= c) v = std::max(v, inst.values[i] + table[i + 1][c - wi]);
        table[i][c] = v;
      }
    }
    if (chosen) {
      *chosen = 0;
      std::size_t c = cap;
      for (int i = 0; i < n; ++i) {
        const auto wi = static_cast<std::size_t>(d.weights[i]);
        if (table[i][c] != table[i + 1][c]) {
          *chosen |= std::uint64_t{1} << i;
          c -= wi;
        }
      }
    }
    return table[0][cap];
  };

  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  std::uint64_t best_t = 0;
  for (std::uint64_t t = 0; t < (std::uint64_t{1} << n); ++t) {
    std::int64_t used = 0;
    for (int i = 0; i < n; ++i)
      if (t >> i & 1U) used += d.leader_weights[i];
    if (used > d.leader_capacity) continue;
    bool maximal = true;
    for (int i = 0; i < n && maximal; ++i)
      if (!(t >> i & 1U) && used + d.leader_weights[i] <= d.leader_capacity) maximal = false;
    if (!maximal) continue;
    const auto f = inner(t, nullptr);
    if (f < best) {
      best = f;
      best_t = t;
    }
  }
  SolveResult r;
  std::uint64_t x = 0;
  inner(best_t, &x);
  std::vector<double> t(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) t[i] = (best_t >> i & 1U) ? 1.0 : 0.0;
  r.tolls = TollVector(inst, std::move(t));
  r.response = mask_from_bits(static_cast<std::size_t>(n), x);
  r.revenue = static_cast<double>(best);
  r.bound = r.revenue;
  return r;
}

}  // namespace dpprice
