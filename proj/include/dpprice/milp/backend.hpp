#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "dpprice/core/error.hpp"
#include "dpprice/milp/branch_and_bound.hpp"

namespace dpprice::milp {

class MilpBackend {
 public:
  virtual ~MilpBackend() = default;
  virtual std::string name() const = 0;
  virtual MilpSolution solve(const ModelSpec& model, const LazyCallback& callback,
                             const std::vector<std::vector<double>>& incumbents, const MilpOptions& opt) const = 0;
};

// Cuts are handled inside one branch-and-bound tree.
class NativeBackend final : public MilpBackend {
 public:
  std::string name() const override { return "native"; }
  MilpSolution solve(const ModelSpec& model, const LazyCallback& callback,
                     const std::vector<std::vector<double>>& incumbents, const MilpOptions& opt) const override {
    return solve_milp(model, callback, incumbents, opt);
  }
};

// Solves the master to optimality, checks the optimum, appends the cuts and
// starts over.
class IterativeBackend final : public MilpBackend {
 public:
  std::string name() const override { return "iterative"; }
  MilpSolution solve(const ModelSpec& model, const LazyCallback& callback,
                     const std::vector<std::vector<double>>& incumbents, const MilpOptions& opt) const override {
    using namespace bb_detail;
    const auto t0 = Clock::now();
    ModelSpec m = model;
    auto pool = incumbents;
    MilpStats agg;
    std::vector<Row> cuts;
    for (;;) {
      MilpOptions o = opt;
      o.time_limit = opt.time_limit - seconds_since(t0);
      o.node_limit = opt.node_limit - agg.nodes;
      MilpSolution sol;
      if (o.time_limit <= 0 || o.node_limit <= 0) {
        sol = solve_milp(m, nullptr, pool, [&] {
          MilpOptions z = o;
          z.node_limit = 0;
          return z;
        }());
      } else {
        sol = solve_milp(m, nullptr, pool, o);
      }
      agg.nodes += sol.stats.nodes;
      agg.lp_iterations += sol.stats.lp_iterations;
      auto finish = [&](MilpSolution s) {
        s.stats.nodes = agg.nodes;
        s.stats.lp_iterations = agg.lp_iterations;
        s.stats.callback_calls = agg.callback_calls;
        s.stats.callback_time = agg.callback_time;
        s.stats.cuts = agg.cuts;
        s.stats.total_time = seconds_since(t0);
        s.cuts = cuts;
        return s;
      };
      if (sol.status != MilpStatus::optimal || !callback) return finish(std::move(sol));
      const auto c0 = Clock::now();
      auto res = callback(sol.values);
      agg.callback_time += seconds_since(c0);
      ++agg.callback_calls;
      bool violated = false;
      for (auto& c : res.cuts) {
        if (c.violation(sol.values) > opt.cut_violation) violated = true;
        m.add_row(c);
        cuts.push_back(std::move(c));
        ++agg.cuts;
      }
      for (auto& s : res.solutions) pool.push_back(std::move(s));
      if (sol.has_incumbent) pool.push_back(sol.values);
      if (!violated) return finish(std::move(sol));
      if (seconds_since(t0) > opt.time_limit) {
        // best verified assignment so far with the last master bound
        MilpOptions z = opt;
        z.node_limit = 0;
        auto last = solve_milp(m, nullptr, pool, z);
        last.status = MilpStatus::limit;
        last.bound = sol.bound;
        last.objective = last.has_incumbent ? m.objective_value(last.values) : std::nan("");
        last.gap = last.has_incumbent ? gap_of(last.objective, last.bound) : kInf;
        return finish(std::move(last));
      }
    }
  }
};

class BackendRegistry {
 public:
  static BackendRegistry& instance() {
    static BackendRegistry reg;
    return reg;
  }

  void add(std::unique_ptr<MilpBackend> b) {
    auto key = b->name();
    backends_[key] = std::move(b);
  }

  const MilpBackend& get(const std::string& name) const {
    auto it = backends_.find(name);
    if (it == backends_.end()) throw ConfigError("unknown backend: " + name);
    return *it->second;
  }

  std::vector<std::string> names() const {
    std::vector<std::string> out;
    for (const auto& [k, v] : backends_) out.push_back(k);
    return out;
  }

 private:
  BackendRegistry() {
    add(std::make_unique<NativeBackend>());
    add(std::make_unique<IterativeBackend>());
  }
  std::map<std::string, std::unique_ptr<MilpBackend>> backends_;
};

}  // namespace dpprice::milp
