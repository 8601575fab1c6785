#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "dpprice/core/instance.hpp"
#include "dpprice/problems/follower_factory.hpp"

namespace dpprice {

struct DifficultyReport {
  double f_zero = 0;      // follower optimum with all tolls at zero
  double f_infinity = 0;  // follower optimum without tolled items
  double g = 0;           // optimal leader revenue
  double score = 0;
};

inline double follower_value_without_tolled(const PricingInstance& inst, const FollowerProblem& problem) {
  const bool maximize = inst.sense() == Sense::maximize;
  double total = 1;
  for (auto v : inst.values) total += static_cast<double>(v);
  std::vector<double> obj(static_cast<std::size_t>(inst.n)), zero(obj.size(), 0.0);
  for (int i = 0; i < inst.n; ++i) {
    const auto v = static_cast<double>(inst.values[i]);
    obj[i] = inst.is_tolled(i) ? (maximize ? -1.0 : total) : v;
  }
  const auto x = problem.solve(obj, zero);
  return static_cast<double>(inst.value_of(x & inst.tollfree()));
}

// (f(0) - f(inf)) / g, with the numerator sign flipped for minimizing followers.
// 0/0 is reported as 0 and a positive numerator over g = 0 as +inf.
inline DifficultyReport estimate_difficulty(const PricingInstance& inst, double g) {
  auto problem = make_follower(inst);
  std::vector<double> obj(static_cast<std::size_t>(inst.n)), zero(obj.size(), 0.0);
  for (int i = 0; i < inst.n; ++i) obj[i] = static_cast<double>(inst.values[i]);
  DifficultyReport r;
  r.f_zero = static_cast<double>(inst.value_of(problem->solve(obj, zero)));
  r.f_infinity = follower_value_without_tolled(inst, *problem);
  r.g = g;
  double num = inst.sense() == Sense::maximize ? r.f_zero - r.f_infinity : r.f_infinity - r.f_zero;
  if (std::abs(num) < 1e-9) num = 0;
  if (std::abs(g) < 1e-9)
    r.score = num == 0 ? 0.0 : std::numeric_limits<double>::infinity();
  else
    r.score = num / g;
  return r;
}

}  // namespace dpprice
