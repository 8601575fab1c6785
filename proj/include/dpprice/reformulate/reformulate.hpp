#pragma once

#include <algorithm>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dpprice/core/error.hpp"
#include "dpprice/core/instance.hpp"
#include "dpprice/diagrams/diagram.hpp"
#include "dpprice/milp/model.hpp"
#include "dpprice/problems/set_cover.hpp"

namespace dpprice {

// Rows x in X over the given x column indices (identity mapping when empty).
inline std::vector<milp::Row> primal_constraints(const PricingInstance& inst, std::span<const int> x_var = {}) {
  auto col = [&](int i) { return x_var.empty() ? i : x_var[i]; };
  std::vector<milp::Row> rows;
  auto knapsack_row = [&](const std::vector<std::int64_t>& w, std::int64_t cap, const char* name) {
    milp::Row r;
    r.name = name;
    r.sense = milp::RowSense::le;
    r.rhs = static_cast<double>(cap);
    for (int i = 0; i < inst.n; ++i)
      if (w[i] != 0) r.terms.push_back({col(i), static_cast<double>(w[i])});
    rows.push_back(std::move(r));
  };
  switch (inst.kind()) {
    case ProblemKind::kpp: knapsack_row(inst.knapsack().weights, inst.knapsack().capacity, "knap"); break;
    case ProblemKind::kip: knapsack_row(inst.kip().weights, inst.kip().capacity, "knap"); break;
    case ProblemKind::maxsspp:
      for (auto [a, b] : inst.graph().edges) {
        milp::Row r;
        r.name = "edge_" + std::to_string(a) + "_" + std::to_string(b);
        r.sense = milp::RowSense::le;
        r.rhs = 1;
        r.terms = {{col(a), 1.0}, {col(b), 1.0}};
        rows.push_back(std::move(r));
      }
      break;
    case ProblemKind::minscpp: {
      const auto& d = inst.set_cover();
      for (int e = 0; e < d.num_elements; ++e) {
        milp::Row r;
        r.name = "cover_" + std::to_string(e);
        r.sense = milp::RowSense::ge;
        r.rhs = 1;
        for (int i = 0; i < inst.n; ++i)
          if (d.sets[i].test(e)) r.terms.push_back({col(i), 1.0});
        rows.push_back(std::move(r));
      }
      break;
    }
  }
  return rows;
}

namespace reformulate_detail {

inline double cover_cost(const PricingInstance& inst, const ItemSet& target, const ItemSet& allowed) {
  const auto& d = inst.set_cover();
  std::vector<double> cost(inst.values.begin(), inst.values.end());
  std::vector<double> zero(cost.size(), 0.0);
  auto x = min_cost_cover(d, target, allowed, cost, zero);
  if (!x) throw ValidationError("toll-free cover assumption violated");
  return static_cast<double>(inst.value_of(*x));
}

}  // namespace reformulate_detail

// Upper bounds on t_i x_i at an optimum, indexed by item (0 on toll-free
// items). Empty for KIP.
inline std::vector<double> mccormick_bounds(const PricingInstance& inst) {
  std::vector<double> m(static_cast<std::size_t>(inst.n), 0.0);
  switch (inst.kind()) {
    case ProblemKind::kip: return {};
    case ProblemKind::kpp:
    case ProblemKind::maxsspp:
      for (int i = 0; i < inst.n; ++i)
        if (inst.is_tolled(i)) m[i] = static_cast<double>(inst.values[i]);
      return m;
    case ProblemKind::minscpp: {
      const auto& d = inst.set_cover();
      const auto ne = static_cast<std::size_t>(d.num_elements);
      const ItemSet free = inst.tollfree();
      const ItemSet all = full_set(static_cast<std::size_t>(inst.n));
      const double toll_free_cost = reformulate_detail::cover_cost(inst, full_set(ne), free);
      for (int i = 0; i < inst.n; ++i) {
        if (!inst.is_tolled(i)) continue;
        const double v = static_cast<double>(inst.values[i]);
        const double p = reformulate_detail::cover_cost(inst, d.sets[i], free) - v;
        ItemSet rest = full_set(ne) - d.sets[i];
        const double q = toll_free_cost - reformulate_detail::cover_cost(inst, rest, all) - v;
        m[i] = std::max(0.0, std::min(p, q));
      }
      return m;
    }
  }
  return m;
}

// A master model plus the maps from items and diagram nodes to its columns.
struct MasterProblem {
  milp::ModelSpec model;
  ProblemKind kind = ProblemKind::kpp;
  Sense sense = Sense::maximize;
  std::vector<int> t_var;  // -1 on toll-free items
  std::vector<int> x_var;
  std::vector<int> s_var;  // -1 where absent
  std::vector<int> y_var;  // by diagram node id
  std::vector<double> M;
  int p_node = -1;
  int q_node = -1;

  int y_of(int node) const {
    if (node < 0 || node >= static_cast<int>(y_var.size()) || y_var[node] < 0)
      throw ValidationError("diagram node has no potential variable");
    return y_var[node];
  }
};

struct CutSpec {
  milp::Row row;
  int arc_id = -1;
  int solution_id = -1;
};

// The dual row of one diagram arc: y_u >= F(a; t) + y_w (<= for a minimizing follower).
inline CutSpec cut_from_arc(const MasterProblem& mp, const PricingInstance& inst, const DiagramArc& arc,
                            int solution_id = -1) {
  CutSpec c;
  c.arc_id = arc.id;
  c.solution_id = solution_id;
  auto& r = c.row;
  r.name = "arc_" + std::to_string(arc.id);
  double vsum = 0;
  const bool minimize = mp.kind != ProblemKind::kip && mp.sense == Sense::minimize;
  for_each_item(arc.items, [&](int i) {
    const double v = static_cast<double>(inst.values[i]);
    vsum += v;
    if (mp.t_var[i] < 0) return;
    if (mp.kind == ProblemKind::kip) {
      if (v != 0) r.terms.push_back({mp.t_var[i], v});
    } else {
      r.terms.push_back({mp.t_var[i], minimize ? -1.0 : 1.0});
    }
  });
  const int yu = mp.y_of(arc.src), yw = mp.y_of(arc.dst);
  r.terms.push_back({yu, 1.0});
  if (yw != yu) r.terms.push_back({yw, -1.0});
  r.sense = minimize ? milp::RowSense::le : milp::RowSense::ge;
  r.rhs = vsum;
  return c;
}

namespace reformulate_detail {

inline void add_potentials(MasterProblem& mp, const Diagram& d, double lower) {
  mp.y_var.assign(d.nodes().size(), -1);
  for (int id : d.topological_order()) {
    milp::Variable v;
    v.name = "y_" + std::to_string(id);
    v.kind = milp::VarKind::potential;
    v.lower = lower;
    v.upper = milp::kInf;
    if (id == d.q()) v.lower = v.upper = 0;
    mp.y_var[id] = mp.model.add_variable(std::move(v));
  }
  mp.p_node = d.p();
  mp.q_node = d.q();
}

inline void add_arc_rows(MasterProblem& mp, const PricingInstance& inst, const Diagram& d) {
  for (const auto& a : d.arcs()) mp.model.add_row(cut_from_arc(mp, inst, a).row);
}

}  // namespace reformulate_detail

// Single-level master of a pricing instance over the current diagram arcs.
inline MasterProblem build_master(const PricingInstance& inst, const Diagram& d,
                                  std::optional<std::vector<double>> M = std::nullopt) {
  if (inst.kind() == ProblemKind::kip) throw ValidationError("use build_kip_master for KIP instances");
  if (d.item_count() != inst.n) throw ValidationError("diagram item count differs from instance");
  MasterProblem mp;
  mp.kind = inst.kind();
  mp.sense = inst.sense();
  mp.M = M ? std::move(*M) : mccormick_bounds(inst);
  if (static_cast<int>(mp.M.size()) != inst.n) throw ValidationError("missing McCormick bounds");
  auto& m = mp.model;
  mp.t_var.assign(inst.n, -1);
  mp.s_var.assign(inst.n, -1);
  mp.x_var.assign(inst.n, -1);
  for (int i = 0; i < inst.n; ++i)
    if (inst.is_tolled(i)) mp.t_var[i] = m.add_variable({"t_" + std::to_string(i), milp::VarKind::toll, 0, milp::kInf, false});
  for (int i = 0; i < inst.n; ++i)
    mp.x_var[i] = m.add_variable({"x_" + std::to_string(i), milp::VarKind::selection, 0, 1, true});
  for (int i = 0; i < inst.n; ++i)
    if (inst.is_tolled(i))
      mp.s_var[i] = m.add_variable({"s_" + std::to_string(i), milp::VarKind::mccormick, 0, milp::kInf, false});
  reformulate_detail::add_potentials(mp, d, -milp::kInf);

  for (auto& r : primal_constraints(inst, mp.x_var)) m.add_row(std::move(r));
  reformulate_detail::add_arc_rows(mp, inst, d);

  milp::Row dual;
  dual.name = "duality";
  dual.sense = milp::RowSense::eq;
  dual.rhs = 0;
  for (int i = 0; i < inst.n; ++i)
    if (inst.values[i] != 0) dual.terms.push_back({mp.x_var[i], static_cast<double>(inst.values[i])});
  for (int i = 0; i < inst.n; ++i)
    if (mp.s_var[i] >= 0) dual.terms.push_back({mp.s_var[i], mp.sense == Sense::maximize ? -1.0 : 1.0});
  dual.terms.push_back({mp.y_of(d.p()), -1.0});
  m.add_row(std::move(dual));

  std::vector<milp::Term> obj;
  for (int i = 0; i < inst.n; ++i) {
    if (mp.s_var[i] < 0) continue;
    const double Mi = mp.M[i];
    const int s = mp.s_var[i], t = mp.t_var[i], x = mp.x_var[i];
    const auto tag = std::to_string(i);
    m.add_row({{{s, 1.0}, {x, -Mi}}, milp::RowSense::le, 0, "mc_sx_" + tag});
    m.add_row({{{t, 1.0}, {s, -1.0}}, milp::RowSense::ge, 0, "mc_ts_" + tag});
    m.add_row({{{t, 1.0}, {s, -1.0}, {x, Mi}}, milp::RowSense::le, Mi, "mc_tx_" + tag});
    obj.push_back({s, 1.0});
  }
  m.set_objective(milp::ObjSense::maximize, std::move(obj));
  return mp;
}

// Interdiction master: binary t and x, min y_p.
inline MasterProblem build_kip_master(const PricingInstance& inst, const Diagram& d) {
  if (inst.kind() != ProblemKind::kip) throw ValidationError("build_kip_master needs a KIP instance");
  if (d.item_count() != inst.n) throw ValidationError("diagram item count differs from instance");
  MasterProblem mp;
  mp.kind = ProblemKind::kip;
  mp.sense = Sense::maximize;
  auto& m = mp.model;
  mp.t_var.assign(inst.n, -1);
  mp.s_var.assign(inst.n, -1);
  mp.x_var.assign(inst.n, -1);
  for (int i = 0; i < inst.n; ++i)
    mp.t_var[i] = m.add_variable({"t_" + std::to_string(i), milp::VarKind::toll, 0, 1, true});
  for (int i = 0; i < inst.n; ++i)
    mp.x_var[i] = m.add_variable({"x_" + std::to_string(i), milp::VarKind::selection, 0, 1, true});
  reformulate_detail::add_potentials(mp, d, 0.0);

  const auto& k = inst.kip();
  milp::Row lead;
  lead.name = "interdict";
  lead.sense = milp::RowSense::le;
  lead.rhs = static_cast<double>(k.leader_capacity);
  for (int i = 0; i < inst.n; ++i)
    if (k.leader_weights[i] != 0) lead.terms.push_back({mp.t_var[i], static_cast<double>(k.leader_weights[i])});
  m.add_row(std::move(lead));
  for (auto& r : primal_constraints(inst, mp.x_var)) m.add_row(std::move(r));
  reformulate_detail::add_arc_rows(mp, inst, d);
  m.set_objective(milp::ObjSense::minimize, {{mp.y_of(d.p()), 1.0}});
  return mp;
}

}  // namespace dpprice
