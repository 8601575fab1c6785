#pragma once

#include <memory>

#include "dpprice/core/instance.hpp"
#include "dpprice/problems/knapsack.hpp"
#include "dpprice/problems/set_cover.hpp"
#include "dpprice/problems/stable_set.hpp"

namespace dpprice {

inline std::unique_ptr<FollowerProblem> make_follower(const PricingInstance& inst) {
  switch (inst.kind()) {
    case ProblemKind::kpp:
      return std::make_unique<KnapsackFollower>(inst.knapsack().weights, inst.knapsack().capacity);
    case ProblemKind::maxsspp:
      return std::make_unique<StableSetFollower>(inst.graph());
    case ProblemKind::minscpp:
      return std::make_unique<SetCoverFollower>(inst.set_cover());
    case ProblemKind::kip:
      return std::make_unique<KnapsackFollower>(inst.kip().weights, inst.kip().capacity);
  }
  return nullptr;
}

inline ItemSet sample_maximal(const FollowerProblem& problem, Rng& rng) { return problem.sample_solution(rng); }

}  // namespace dpprice
