#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "dpprice/core/instance.hpp"
#include "dpprice/core/item_set.hpp"

namespace dpprice {

enum class SolveStatus { optimal, limit, infeasible, error };

inline const char* status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::limit: return "limit";
    case SolveStatus::infeasible: return "infeasible";
    case SolveStatus::error: return "error";
  }
  return "?";
}

struct SolveStats {
  double total_time = 0;
  double callback_time = 0;
  long callback_calls = 0;
  long bb_nodes = 0;
  long cuts_added = 0;
  long lp_iterations = 0;
  long solutions_added = 0;  // distinct follower solutions turned into cuts
  long cut_rounds = 0;       // callback calls that rejected the candidate
};

struct SolveResult {
  SolveStatus status = SolveStatus::optimal;
  TollVector tolls;
  ItemSet response;
  // Leader revenue t.x for pricing problems; interdicted follower value f(t) for KIP.
  double revenue = 0;
  double bound = 0;
  double gap = 0;
  SolveStats stats;
};

// Relative gap; sense is the leader's optimization direction.
inline double relative_gap(double incumbent, double bound, Sense leader_sense, double eps = 1e-9) {
  const double diff = leader_sense == Sense::maximize ? bound - incumbent : incumbent - bound;
  return std::max(0.0, diff) / std::max(std::abs(bound), eps);
}

}  // namespace dpprice
