#pragma once

#include <chrono>
#include <climits>
#include <cmath>
#include <functional>
#include <queue>
#include <vector>

#include "dpprice/milp/model.hpp"
#include "dpprice/milp/simplex.hpp"

namespace dpprice::milp {

struct MilpOptions {
  double int_tol = 1e-6;
  double feas_tol = 1e-6;
  double cut_violation = 1e-7;
  double abs_gap = 1e-7;
  double time_limit = kInf;
  long node_limit = LONG_MAX;
  LpOptions lp;
};

enum class MilpStatus { optimal, infeasible, unbounded, limit };

inline const char* milp_status_name(MilpStatus s) {
  switch (s) {
    case MilpStatus::optimal: return "optimal";
    case MilpStatus::infeasible: return "infeasible";
    case MilpStatus::unbounded: return "unbounded";
    case MilpStatus::limit: return "limit";
  }
  return "?";
}

struct MilpStats {
  long nodes = 0;
  long callback_calls = 0;
  long cuts = 0;
  long lp_iterations = 0;
  double callback_time = 0;
  double total_time = 0;
};

// What a lazy callback hands back: rows to add globally and full assignments
// to try as incumbents.
struct CallbackResult {
  std::vector<Row> cuts;
  std::vector<std::vector<double>> solutions;
};

using LazyCallback = std::function<CallbackResult(const std::vector<double>&)>;

struct MilpSolution {
  MilpStatus status = MilpStatus::infeasible;
  bool has_incumbent = false;
  std::vector<double> values;
  double objective = std::nan("");
  double bound = std::nan("");
  double gap = kInf;
  MilpStats stats;
  std::vector<Row> cuts;
};

namespace bb_detail {

using Clock = std::chrono::steady_clock;

inline double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Node {
  long id = 0;
  double bound = kInf;
  std::vector<double> lo, hi;
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound < b.bound;
    return a.id > b.id;
  }
};

inline double gap_of(double obj, double bound) {
  if (!std::isfinite(obj) || !std::isfinite(bound)) return kInf;
  return std::abs(bound - obj) / std::max(1e-10, std::abs(obj));
}

}  // namespace bb_detail

// LP-based branch and bound with lazy constraints. Nodes are explored best
// bound first; integral LP solutions go through the callback, and any returned
// violated cut is added to every node.
inline MilpSolution solve_milp(const ModelSpec& model, const LazyCallback& callback,
                               const std::vector<std::vector<double>>& incumbents = {},
                               const MilpOptions& opt = {}) {
  using namespace bb_detail;
  const auto t0 = Clock::now();
  const double sign = model.objective_sense() == ObjSense::maximize ? 1.0 : -1.0;
  const int n = model.num_vars();

  std::vector<double> cost(n, 0.0), lb(n), ub(n);
  for (const auto& t : model.objective()) cost[t.var] += sign * t.coef;
  std::vector<int> ints;
  for (int j = 0; j < n; ++j) {
    const auto& v = model.variable(j);
    lb[j] = v.lower;
    ub[j] = v.upper;
    if (v.integer) {
      ints.push_back(j);
      lb[j] = std::ceil(lb[j] - opt.int_tol);
      ub[j] = std::floor(ub[j] + opt.int_tol);
    }
  }
  LpTableau lp(cost, lb, ub, opt.lp);
  for (const auto& r : model.rows()) lp.add_row(r);

  MilpSolution out;
  double inc = -kInf;

  auto feasible_all = [&](const std::vector<double>& x) {
    if (static_cast<int>(x.size()) != n || !model.is_feasible(x, opt.feas_tol)) return false;
    for (const auto& c : out.cuts)
      if (c.violation(x) > opt.feas_tol) return false;
    return true;
  };
  auto install = [&](const std::vector<double>& x) {
    const double z = sign * model.objective_value(x);
    if (z <= inc) return;
    inc = z;
    out.values = x;
    out.has_incumbent = true;
  };
  auto try_install = [&](const std::vector<double>& x) {
    if (feasible_all(x)) install(x);
  };
  for (const auto& s : incumbents) try_install(s);

  std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
  long next_id = 0;
  {
    Node root;
    root.id = next_id++;
    for (int j : ints) {
      root.lo.push_back(lb[j]);
      root.hi.push_back(ub[j]);
    }
    open.push(std::move(root));
  }

  bool limited = false;
  bool unbounded = false;
  auto out_of_time = [&] { return seconds_since(t0) > opt.time_limit; };

  while (!open.empty()) {
    if (out.stats.nodes >= opt.node_limit || out_of_time()) {
      limited = true;
      break;
    }
    Node node = open.top();
    open.pop();
    if (node.bound <= inc + opt.abs_gap) continue;
    for (std::size_t k = 0; k < ints.size(); ++k) lp.set_bounds(ints[k], node.lo[k], node.hi[k]);
    ++out.stats.nodes;

    for (;;) {
      const auto st = lp.solve();
      if (st == LpStatus::infeasible) break;
      if (st == LpStatus::unbounded) {
        unbounded = true;
        break;
      }
      const double z = lp.objective();
      if (z <= inc + opt.abs_gap) break;
      auto x = lp.primal();

      int branch = -1;
      double best_frac = opt.int_tol;
      for (std::size_t k = 0; k < ints.size(); ++k) {
        const double v = x[ints[k]];
        const double frac = std::abs(v - std::round(v));
        if (frac > best_frac + 1e-12) {
          best_frac = frac;
          branch = static_cast<int>(k);
        }
      }
      if (branch >= 0) {
        const double v = x[ints[branch]];
        Node down = node, up = node;
        down.id = next_id++;
        up.id = next_id++;
        down.bound = up.bound = z;
        down.hi[branch] = std::floor(v);
        up.lo[branch] = std::ceil(v);
        open.push(std::move(down));
        open.push(std::move(up));
        break;
      }

      for (int j : ints) x[j] = std::round(x[j]);
      if (!callback) {
        install(x);
        break;
      }
      const auto c0 = Clock::now();
      auto res = callback(x);
      out.stats.callback_time += seconds_since(c0);
      ++out.stats.callback_calls;
      bool violated = false;
      for (auto& c : res.cuts) {
        if (c.violation(x) > opt.cut_violation) violated = true;
        lp.add_row(c);
        out.cuts.push_back(std::move(c));
        ++out.stats.cuts;
      }
      for (const auto& s : res.solutions) try_install(s);
      if (!violated) {
        install(x);
        break;
      }
      if (out_of_time()) {
        node.bound = z;
        open.push(node);
        limited = true;
        break;
      }
    }
    if (unbounded || limited) break;
  }

  out.stats.lp_iterations = lp.iterations();
  out.stats.total_time = seconds_since(t0);
  if (unbounded) {
    out.status = MilpStatus::unbounded;
    return out;
  }
  double bound = inc;
  if (limited) {
    while (!open.empty()) {
      bound = std::max(bound, open.top().bound);
      open.pop();
    }
    out.status = MilpStatus::limit;
  } else {
    out.status = out.has_incumbent ? MilpStatus::optimal : MilpStatus::infeasible;
  }
  if (out.has_incumbent) out.objective = model.objective_value(out.values);
  out.bound = sign * bound;
  out.gap = out.has_incumbent ? (out.status == MilpStatus::optimal ? 0.0 : gap_of(out.objective, out.bound)) : kInf;
  return out;
}

}  // namespace dpprice::milp
