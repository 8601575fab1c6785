#pragma once

#include <algorithm>
#include <climits>
#include <cmath>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "dpprice/core/error.hpp"
#include "dpprice/core/follower.hpp"
#include "dpprice/core/result.hpp"
#include "dpprice/diagrams/decision.hpp"
#include "dpprice/diagrams/diagram.hpp"
#include "dpprice/diagrams/selection.hpp"
#include "dpprice/milp/backend.hpp"
#include "dpprice/problems/follower_factory.hpp"
#include "dpprice/reformulate/reformulate.hpp"

namespace dpprice {

enum class Method { vf, sd, dd };

inline const char* method_name(Method m) {
  switch (m) {
    case Method::vf: return "vf";
    case Method::sd: return "sd";
    case Method::dd: return "dd";
  }
  return "?";
}

inline Method parse_method(const std::string& s) {
  if (s == "vf") return Method::vf;
  if (s == "sd") return Method::sd;
  if (s == "dd") return Method::dd;
  throw ConfigError("unknown method: " + s);
}

struct MethodConfig {
  Method method = Method::vf;
  int pairs = 0;   // N for the selection diagram
  int width = 0;   // W for the decision diagram
  int layers = 0;  // m item groups; 0 keeps one item per layer
  std::string backend = "native";
  double eps = 1e-6;
  double time_limit = milp::kInf;
  long node_limit = LONG_MAX;
  std::uint64_t seed = 0;
  std::optional<std::vector<double>> mccormick_override;
  bool record_trace = false;

  void validate(int n) const {
    if (pairs < 0) throw ConfigError("pair count must be nonnegative");
    if (width < 0) throw ConfigError("width must be nonnegative");
    if (layers < 0 || layers > n) throw ConfigError("layer count must lie in [1, n]");
    if (!(eps >= 0)) throw ConfigError("eps must be nonnegative");
    milp::BackendRegistry::instance().get(backend);
  }

  // "vf", "sd:N", "dd:W" or "dd:W:m"
  std::string label() const {
    switch (method) {
      case Method::vf: return "vf";
      case Method::sd: return "sd:" + std::to_string(pairs);
      case Method::dd:
        return "dd:" + std::to_string(width) + (layers > 0 ? ":" + std::to_string(layers) : std::string());
    }
    return "?";
  }
};

inline MethodConfig parse_method_label(const std::string& label) {
  std::vector<std::string> parts;
  std::stringstream ss(label);
  for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
  if (parts.empty()) throw ConfigError("empty method label");
  MethodConfig c;
  c.method = parse_method(parts[0]);
  auto num = [&](std::size_t k) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(parts[k], &used);
      if (used != parts[k].size() || v < 0) throw ConfigError("bad number in method label: " + label);
      return v;
    } catch (const std::logic_error&) {
      throw ConfigError("bad number in method label: " + label);
    }
  };
  const std::size_t max_parts = c.method == Method::vf ? 1 : c.method == Method::sd ? 2 : 3;
  if (parts.size() > max_parts) throw ConfigError("too many fields in method label: " + label);
  if (c.method == Method::sd && parts.size() > 1) c.pairs = num(1);
  if (c.method == Method::dd && parts.size() > 1) c.width = num(1);
  if (c.method == Method::dd && parts.size() > 2) c.layers = num(2);
  return c;
}

struct TraceEntry {
  double candidate_revenue = 0;  // t.x of the candidate (y_p for KIP)
  double follower_value = 0;     // optimal follower value at the candidate tolls
  bool accepted = false;
  ItemSet added;                 // solution turned into cuts when rejected
};

struct DriverRun {
  SolveResult result;
  Diagram initial{DiagramKind::value_function, 0, 1};
  Diagram final_diagram{DiagramKind::value_function, 0, 1};
  std::vector<TraceEntry> trace;
};

namespace driver_detail {

inline Diagram initial_diagram(const PricingInstance& inst, const FollowerProblem& problem, const MethodConfig& cfg,
                               Rng& rng) {
  switch (cfg.method) {
    case Method::vf: return vf_diagram(inst.n);
    case Method::sd: return sd_init(problem, cfg.pairs, rng);
    case Method::dd: {
      const auto grouping = cfg.layers == 0 ? identity_grouping(inst.n) : make_grouping(inst.n, cfg.layers, rng);
      return dd_init(inst, problem, cfg.width, grouping, rng);
    }
  }
  throw ConfigError("unknown method");
}

// Node potentials satisfying every arc row for the given per-item arc lengths.
inline std::vector<double> potentials(const Diagram& d, std::span<const double> obj, bool maximize, double floor) {
  std::vector<double> y(d.nodes().size(), 0.0);
  const auto order = d.topological_order();
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const int u = *it;
    if (u == d.q()) continue;
    bool any = false;
    double best = 0;
    for (int a : d.out_arcs(u)) {
      const auto& arc = d.arc(a);
      const double v = arc_length(arc, obj) + y[arc.dst];
      if (!any || (maximize ? v > best : v < best)) best = v;
      any = true;
    }
    y[u] = any ? std::max(best, floor) : std::max(0.0, floor);
  }
  return y;
}

class CuttingPlane {
 public:
  CuttingPlane(const PricingInstance& inst, const MethodConfig& cfg)
      : inst_(inst), cfg_(cfg), problem_(make_follower(inst)), rng_(cfg.seed),
        diagram_(initial_diagram(inst, *problem_, cfg, rng_)) {
    run_.initial = diagram_;
    kip_ = inst.kind() == ProblemKind::kip;
    mp_ = kip_ ? build_kip_master(inst, diagram_) : build_master(inst, diagram_, cfg.mccormick_override);
  }

  DriverRun run() {
    const auto& backend = milp::BackendRegistry::instance().get(cfg_.backend);
    milp::MilpOptions opt;
    opt.time_limit = cfg_.time_limit;
    opt.node_limit = cfg_.node_limit;
    std::vector<std::vector<double>> start{initial_incumbent()};
    auto cb = [this](const std::vector<double>& cand) { return callback(cand); };
    const auto sol = backend.solve(mp_.model, cb, start, opt);

    auto& r = run_.result;
    r.stats.total_time = sol.stats.total_time;
    r.stats.callback_time = sol.stats.callback_time;
    r.stats.callback_calls = sol.stats.callback_calls;
    r.stats.bb_nodes = sol.stats.nodes;
    r.stats.cuts_added = sol.stats.cuts;
    r.stats.lp_iterations = sol.stats.lp_iterations;
    r.stats.solutions_added = static_cast<long>(seen_.size());
    r.stats.cut_rounds = rejections_;
    switch (sol.status) {
      case milp::MilpStatus::optimal: r.status = SolveStatus::optimal; break;
      case milp::MilpStatus::limit: r.status = SolveStatus::limit; break;
      case milp::MilpStatus::infeasible: r.status = SolveStatus::infeasible; break;
      case milp::MilpStatus::unbounded: r.status = SolveStatus::error; break;
    }
    if (!sol.has_incumbent) throw Error("master returned no incumbent");
    const auto t = tolls_of(sol.values);
    r.tolls = TollVector(inst_, t);
    if (kip_) {
      const auto br = optimistic_best_response(*problem_, inst_, r.tolls);
      r.response = br.x;
      r.revenue = br.follower_value;
    } else {
      r.response = selection_of(sol.values);
      r.revenue = r.tolls.dot(r.response);
    }
    r.bound = std::isfinite(sol.bound) ? sol.bound : r.revenue;
    if (r.status == SolveStatus::optimal) r.bound = r.revenue;
    r.gap = relative_gap(r.revenue, r.bound, kip_ ? Sense::minimize : Sense::maximize);
    run_.final_diagram = diagram_;
    return std::move(run_);
  }

 private:
  const PricingInstance& inst_;
  MethodConfig cfg_;
  std::unique_ptr<FollowerProblem> problem_;
  Rng rng_;
  Diagram diagram_;
  MasterProblem mp_;
  bool kip_ = false;
  DriverRun run_;
  std::set<std::string> seen_;
  long rejections_ = 0;

  std::vector<double> tolls_of(const std::vector<double>& v) const {
    std::vector<double> t(static_cast<std::size_t>(inst_.n), 0.0);
    for (int i = 0; i < inst_.n; ++i) {
      if (mp_.t_var[i] < 0) continue;
      double ti = std::max(0.0, v[mp_.t_var[i]]);
      if (kip_) ti = std::round(ti);
      t[i] = ti;
    }
    return t;
  }

  ItemSet selection_of(const std::vector<double>& v) const {
    ItemSet x(static_cast<std::size_t>(inst_.n));
    for (int i = 0; i < inst_.n; ++i)
      if (v[mp_.x_var[i]] > 0.5) x.set(i);
    return x;
  }

  // Full master assignment for tolls t with follower response x.
  std::vector<double> assignment(const std::vector<double>& t, const ItemSet& x, double follower_value) const {
    std::vector<double> a(static_cast<std::size_t>(mp_.model.num_vars()), 0.0);
    for (int i = 0; i < inst_.n; ++i) {
      if (mp_.t_var[i] >= 0) a[mp_.t_var[i]] = t[i];
      a[mp_.x_var[i]] = x.test(i) ? 1.0 : 0.0;
      if (mp_.s_var[i] >= 0) a[mp_.s_var[i]] = x.test(i) ? t[i] : 0.0;
    }
    const auto obj = follower_objective(inst_, TollVector(inst_, t));
    const bool maximize = kip_ || inst_.sense() == Sense::maximize;
    const auto y = potentials(diagram_, obj, maximize, kip_ ? 0.0 : -milp::kInf);
    for (const auto& node : diagram_.nodes()) a[mp_.y_of(node.id)] = y[node.id];
    a[mp_.y_of(diagram_.q())] = 0.0;
    a[mp_.y_of(diagram_.p())] = follower_value;
    return a;
  }

  std::vector<double> initial_incumbent() const {
    const auto t0 = TollVector::zero(inst_);
    const auto br = optimistic_best_response(*problem_, inst_, t0);
    return assignment(std::vector<double>(static_cast<std::size_t>(inst_.n), 0.0), br.x, br.follower_value);
  }

  std::vector<int> add_to_diagram(const ItemSet& x) {
    std::vector<int> arcs;
    switch (cfg_.method) {
      case Method::vf:
        if (auto a = vf_add_solution(diagram_, x)) arcs.push_back(*a);
        break;
      case Method::sd:
        if (auto a = sd_add_solution(diagram_, x, rng_)) arcs.push_back(*a);
        break;
      case Method::dd: arcs = dd_add_solution(diagram_, inst_, x); break;
    }
    if (arcs.empty())
      if (auto a = diagram_.add_arc(diagram_.p(), diagram_.q(), x)) arcs.push_back(*a);
    return arcs;
  }

  milp::CallbackResult callback(const std::vector<double>& cand) {
    const auto t = tolls_of(cand);
    const TollVector tv(inst_, t);
    const auto br = optimistic_best_response(*problem_, inst_, tv);
    TraceEntry entry;
    entry.follower_value = br.follower_value;
    bool reject = false;
    if (kip_) {
      const double yp = cand[mp_.y_of(diagram_.p())];
      entry.candidate_revenue = yp;
      reject = yp < br.follower_value - cfg_.eps;
    } else {
      const ItemSet xc = selection_of(cand);
      entry.candidate_revenue = tv.dot(xc);
      const double fc = problem_->evaluate(follower_objective(inst_, tv), xc);
      reject = inst_.sense() == Sense::maximize ? fc < br.follower_value - cfg_.eps
                                                : fc > br.follower_value + cfg_.eps;
    }
    milp::CallbackResult res;
    if (reject) {
      const auto arcs = add_to_diagram(br.x);
      if (!arcs.empty()) {
        ++rejections_;
        std::string key;
        boost::to_string(br.x, key);
        seen_.insert(key);
        const int sol_id = static_cast<int>(seen_.size()) - 1;
        for (int a : arcs) res.cuts.push_back(cut_from_arc(mp_, inst_, diagram_.arc(a), sol_id).row);
        res.solutions.push_back(assignment(t, br.x, br.follower_value));
        entry.added = br.x;
      } else {
        reject = false;
      }
    }
    entry.accepted = !reject;
    if (cfg_.record_trace) run_.trace.push_back(std::move(entry));
    return res;
  }
};

}  // namespace driver_detail

// Full run: result plus the initial and final diagrams and, when requested,
// the per-callback trace.
inline DriverRun run_method(const PricingInstance& inst, const MethodConfig& cfg) {
  inst.validate();
  cfg.validate(inst.n);
  driver_detail::CuttingPlane cp(inst, cfg);
  return cp.run();
}

inline SolveResult solve_cpp(const PricingInstance& inst, const MethodConfig& cfg) {
  if (inst.kind() == ProblemKind::kip) throw ConfigError("solve_cpp needs a pricing instance");
  return run_method(inst, cfg).result;
}

inline SolveResult solve_kip(const PricingInstance& inst, const MethodConfig& cfg) {
  if (inst.kind() != ProblemKind::kip) throw ConfigError("solve_kip needs a KIP instance");
  return run_method(inst, cfg).result;
}

inline SolveResult solve(const PricingInstance& inst, const MethodConfig& cfg) { return run_method(inst, cfg).result; }

struct VerifyReport {
  bool ok = true;
  double follower_value = 0;  // optimal follower value at the reported tolls
  double response_value = 0;  // follower value of the reported response
  double revenue = 0;         // recomputed revenue
  std::vector<std::string> issues;
};

// Re-solves the follower at the reported tolls and checks the response and revenue.
inline VerifyReport verify(const PricingInstance& inst, const SolveResult& r, double eps = 1e-6) {
  VerifyReport rep;
  auto flag = [&](std::string msg) {
    rep.ok = false;
    rep.issues.push_back(std::move(msg));
  };
  const auto problem = make_follower(inst);
  const auto br = optimistic_best_response(*problem, inst, r.tolls);
  const auto obj = follower_objective(inst, r.tolls);
  rep.follower_value = br.follower_value;
  if (r.response.size() != static_cast<std::size_t>(inst.n) || !problem->is_feasible(r.response)) {
    flag("response is not a feasible follower solution");
    return rep;
  }
  rep.response_value = problem->evaluate(obj, r.response);
  if (inst.kind() == ProblemKind::kip) {
    const auto& k = inst.kip();
    double used = 0;
    for (int i = 0; i < inst.n; ++i) used += r.tolls[i] * static_cast<double>(k.leader_weights[i]);
    if (used > static_cast<double>(k.leader_capacity) + eps) flag("interdiction budget exceeded");
    rep.revenue = br.follower_value;
    if (std::abs(r.revenue - br.follower_value) > eps) flag("reported objective differs from follower optimum");
    if (std::abs(rep.response_value - br.follower_value) > eps) flag("response is not a best response");
    return rep;
  }
  rep.revenue = r.tolls.dot(r.response);
  if (std::abs(rep.response_value - br.follower_value) > eps) flag("response is not a best response");
  if (std::abs(rep.revenue - r.revenue) > eps) flag("reported revenue differs from t.x");
  return rep;
}

}  // namespace dpprice
