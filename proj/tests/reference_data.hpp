#pragma once

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "dpprice/dpprice.hpp"

namespace testing_support {

// Arc text "layer:state->layer:state items", with "q" for the terminal.
inline std::string node_str(const dpprice::Diagram& d, int id) {
  if (id == d.q()) return "q";
  return std::to_string(d.node(id).layer) + ":" + dpprice::state_label(d.node(id).state);
}

inline std::string arc_str(const dpprice::Diagram& d, int a) {
  const auto& arc = d.arc(a);
  return node_str(d, arc.src) + "->" + node_str(d, arc.dst) + " " + dpprice::format_set(arc.items);
}

inline std::set<std::string> arc_strs(const dpprice::Diagram& d) {
  std::set<std::string> out;
  for (const auto& a : d.arcs()) out.insert(arc_str(d, a.id));
  return out;
}

// Renders an arc row as "y<src> >= rhs - t<i> ... + y<dst>" with node labels
// from `label`; the y_q term is dropped since y_q = 0.
template <class Label>
std::string render_arc_row(const dpprice::MasterProblem& mp, const dpprice::Diagram& d, const dpprice::milp::Row& r,
                           Label label) {
  std::map<int, int> node_of, item_of;
  for (std::size_t id = 0; id < mp.y_var.size(); ++id) node_of[mp.y_var[id]] = static_cast<int>(id);
  for (std::size_t i = 0; i < mp.t_var.size(); ++i)
    if (mp.t_var[i] >= 0) item_of[mp.t_var[i]] = static_cast<int>(i);
  int src = -1, dst = d.q();
  std::vector<int> tolls;
  for (const auto& t : r.terms) {
    if (node_of.count(t.var))
      (t.coef > 0 ? src : dst) = node_of[t.var];
    else
      tolls.push_back(item_of.at(t.var));
  }
  std::sort(tolls.begin(), tolls.end());
  char rhs[32];
  std::snprintf(rhs, sizeof rhs, "%g", r.rhs);
  std::string s = "y" + label(src) + (r.sense == dpprice::milp::RowSense::ge ? " >= " : " <= ") + rhs;
  for (int i : tolls) s += " - t" + std::to_string(i);
  if (dst != d.q()) s += " + y" + label(dst);
  return s;
}

template <class Label>
std::set<std::string> arc_rows(const dpprice::MasterProblem& mp, const dpprice::Diagram& d, Label label) {
  std::set<std::string> out;
  for (const auto& r : mp.model.rows())
    if (r.name.rfind("arc_", 0) == 0) out.insert(render_arc_row(mp, d, r, label));
  return out;
}

// Selection diagram of the four-item knapsack after sampling two pairs with seed 59.
inline const std::set<std::string> kSelectionInitialArcs{
    "0:{}->1:{0} {0}",    "0:{}->1:{1} {1}",    "0:{}->1:{3} {3}",    "1:{0}->2:{0,1} {1}",
    "1:{1}->2:{0,1} {0}", "1:{1}->2:{1,3} {3}", "1:{3}->2:{1,3} {1}"};

// Terminal arcs added for {0,1,2}, {1,3}, {0,3}, {2,3} in that order.
inline const std::vector<std::string> kSelectionAddedArcs{"2:{0,1}->q {2}", "2:{1,3}->q {}", "1:{0}->q {3}",
                                                          "1:{3}->q {2}"};

// Decision diagram of the four-item knapsack from the samples {0,1,2} and {2,3} (seed 26).
inline const std::set<std::string> kDecisionInitialArcs{"0:3->1:2 {0}", "1:2->2:1 {1}", "2:1->3:0 {2}",
                                                        "3:0->q {}",    "0:3->1:3 {}",  "1:3->2:3 {}",
                                                        "2:3->3:2 {2}", "3:2->q {3}"};

// Arc rows of the full selection diagram of the four-item knapsack.
inline const std::set<std::string> kSelectionRows{
    "y{} >= 1 - t0 + y{0}",        "y{} >= 1 - t1 + y{1}",        "y{} >= 1 - t2 + y{2}",
    "y{} >= 1 + y{3}",             "y{0} >= 1 - t1 + y{0,1}",     "y{1} >= 1 - t0 + y{0,1}",
    "y{2} >= 1 - t0 + y{0,2}",     "y{3} >= 1 - t0 + y{0,3}",     "y{0} >= 1 - t2 + y{0,2}",
    "y{1} >= 1 - t2 + y{1,2}",     "y{2} >= 1 - t1 + y{1,2}",     "y{3} >= 1 - t1 + y{1,3}",
    "y{0} >= 1 + y{0,3}",          "y{1} >= 1 + y{1,3}",          "y{2} >= 1 + y{2,3}",
    "y{3} >= 1 - t2 + y{2,3}",     "y{0,1} >= 1 - t2 + y{0,1,2}", "y{0,2} >= 1 - t1 + y{0,1,2}",
    "y{1,2} >= 1 - t0 + y{0,1,2}", "y{0,3} >= 0",                 "y{1,3} >= 0",
    "y{2,3} >= 0",                 "y{0,1,2} >= 0"};

// Arc rows of the simplified full decision diagram of the four-item knapsack,
// nodes written (layer,capacity).
inline const std::set<std::string> kDecisionRows{
    "y(0,3) >= 0 + y(1,3)", "y(0,3) >= 1 - t0 + y(1,2)", "y(1,2) >= 0 + y(2,2)", "y(1,2) >= 1 - t1 + y(2,1)",
    "y(1,3) >= 0 + y(2,3)", "y(1,3) >= 1 - t1 + y(2,2)", "y(2,1) >= 0 + y(3,1)", "y(2,1) >= 1 - t2 + y(3,0)",
    "y(2,2) >= 0 + y(3,2)", "y(2,2) >= 1 - t2 + y(3,1)", "y(3,0) >= 0",          "y(2,3) >= 1 - t2 + y(3,2)",
    "y(3,1) >= 0",          "y(3,2) >= 1"};

inline std::set<std::string> selection_rows(const dpprice::PricingInstance& inst) {
  const auto d = dpprice::sd_full(*dpprice::make_follower(inst));
  return arc_rows(dpprice::build_master(inst, d), d, [&](int id) { return dpprice::state_label(d.node(id).state); });
}

inline std::set<std::string> decision_rows(const dpprice::PricingInstance& inst) {
  const auto d = dpprice::dd_full(inst, dpprice::identity_grouping(inst.n));
  return arc_rows(dpprice::build_master(inst, d), d, [&](int id) {
    return "(" + std::to_string(d.node(id).layer) + "," + dpprice::state_label(d.node(id).state) + ")";
  });
}

}  // namespace testing_support
