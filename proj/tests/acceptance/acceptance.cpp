// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "dpprice/cli/results.hpp"
#include "dpprice/dpprice.hpp"
#include "reference_data.hpp"
#include "test_instances.hpp"

using namespace dpprice;

namespace {

constexpr double kTol = 1e-6;

struct Check {
  long checked = 0;
  long failed = 0;
  std::vector<std::string> notes;

  void expect(bool ok, const std::string& what) {
    ++checked;
    if (ok) return;
    ++failed;
    if (notes.size() < 10) notes.push_back(what);
  }
  bool ok() const { return failed == 0 && checked > 0; }
};

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

MethodConfig config(const std::string& label, std::uint64_t seed, const std::string& backend) {
  auto c = parse_method_label(label);
  c.seed = seed;
  c.backend = backend;
  return c;
}

std::vector<std::string> method_labels(int n) {
  const auto m = std::to_string((n + 1) / 2);
  return {"vf", "sd:0", "sd:2", "sd:8", "dd:0", "dd:2", "dd:8", "dd:0:" + m, "dd:2:" + m, "dd:8:" + m};
}

const std::vector<std::string> kBackends{"native", "iterative"};

struct Named {
  std::string id;
  PricingInstance inst;
  std::uint64_t seed;
};

std::vector<Named> pricing_instances() {
  std::vector<Named> out;
  const double ratios[] = {0.3, 0.5, 0.7};
  for (int k = 0; k < 200; ++k) {
    const std::uint64_t seed = 1000 + k;
    const int n = 6 + k % 7;
    out.push_back({"kpp_n" + std::to_string(n) + "_s" + std::to_string(seed), generate_kpp(n, ratios[k % 3], seed),
                   seed});
  }
  for (int k = 0; k < 200; ++k) {
    const std::uint64_t seed = 2000 + k;
    const int n = 6 + k % 7;
    const double d = k % 2 ? 0.4 : 0.2;
    out.push_back({"maxsspp_n" + std::to_string(n) + "_d" + fmt(d) + "_s" + std::to_string(seed),
                   generate_maxsspp(n, d, seed), seed});
  }
  for (int k = 0; k < 200; ++k) {
    const std::uint64_t seed = 3000 + k;
    const int sets = 6 + k % 5, elements = 6 + k % 3;
    out.push_back({"minscpp_n" + std::to_string(sets) + "_e" + std::to_string(elements) + "_s" + std::to_string(seed),
                   generate_minscpp_elements(sets, elements, seed), seed});
  }
  return out;
}

std::vector<Named> kip_instances(int count, int n_lo, int n_hi, std::uint64_t base) {
  std::vector<Named> out;
  for (int k = 0; k < count; ++k) {
    const std::uint64_t seed = base + k;
    const int n = n_lo + k % (n_hi - n_lo + 1);
    out.push_back({"kip_n" + std::to_string(n) + "_s" + std::to_string(seed), generate_kip(n, seed), seed});
  }
  return out;
}

// Runs every method under both backends; results are keyed by
// (instance index, label, backend).
struct Sweep {
  std::map<std::tuple<std::size_t, std::string, std::string>, SolveResult> runs;
  std::vector<double> oracle;
};

Sweep sweep(const std::vector<Named>& insts, bool kip) {
  Sweep s;
  for (std::size_t k = 0; k < insts.size(); ++k) {
    const auto& inst = insts[k].inst;
    s.oracle.push_back(kip ? brute_force_kip(inst).revenue : brute_force_cpp(inst, mccormick_bounds(inst)).revenue);
    for (const auto& label : method_labels(inst.n))
      for (const auto& b : kBackends) {
        const auto cfg = config(label, insts[k].seed, b);
        s.runs[{k, label, b}] = kip ? solve_kip(inst, cfg) : solve_cpp(inst, cfg);
      }
  }
  return s;
}

void match_oracle(Check& c, const std::vector<Named>& insts, const Sweep& s) {
  for (const auto& [key, r] : s.runs) {
    const auto& [k, label, backend] = key;
    const auto what = insts[k].id + " " + label + " " + backend;
    c.expect(r.status == SolveStatus::optimal, what + ": status " + status_name(r.status));
    c.expect(std::abs(r.revenue - s.oracle[k]) <= kTol,
             what + ": revenue " + fmt(r.revenue) + " vs oracle " + fmt(s.oracle[k]));
    c.expect(verify(insts[k].inst, r).ok, what + ": solution does not verify");
  }
}

std::uint64_t to_bits(const ItemSet& x) {
  std::uint64_t b = 0;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x.test(i)) b |= std::uint64_t{1} << i;
  return b;
}

// Optimal follower value by enumerating every feasible response.
double enumerated_follower_value(const PricingInstance& inst, std::span<const double> obj) {
  const bool maximize = inst.sense() == Sense::maximize;
  double best = maximize ? -milp::kInf : milp::kInf;
  for (std::uint64_t b = 0; b < (std::uint64_t{1} << inst.n); ++b) {
    if (!oracle_detail::feasible_bits(inst, b)) continue;
    double v = 0;
    for (int i = 0; i < inst.n; ++i)
      if (b >> i & 1U) v += obj[i];
    best = maximize ? std::max(best, v) : std::min(best, v);
  }
  return best;
}

// Tolls for maximizing followers stay within [0, v] where extremal responses
// are sufficient; minimizing followers get tolls up to 1.5 v.
TollVector random_tolls(const PricingInstance& inst, Rng& rng) {
  std::vector<double> t(static_cast<std::size_t>(inst.n), 0.0);
  for (int i = 0; i < inst.n; ++i) {
    if (!inst.is_tolled(i)) continue;
    if (inst.kind() == ProblemKind::kip)
      t[i] = rng.bernoulli(0.3) ? 1.0 : 0.0;
    else
      t[i] = rng.uniform_real(0, (inst.sense() == Sense::maximize ? 1.0 : 1.5) * static_cast<double>(inst.values[i]));
  }
  return TollVector(inst, t);
}

// Random p-q walk. Returns nullopt at a dead end.
std::optional<ItemSet> random_path(const Diagram& d, Rng& rng) {
  ItemSet s(static_cast<std::size_t>(d.item_count()));
  int u = d.p();
  while (u != d.q()) {
    const auto& out = d.out_arcs(u);
    if (out.empty()) return std::nullopt;
    const auto& arc = d.arc(out[rng.below(out.size())]);
    s |= arc.items;
    u = arc.dst;
  }
  return s;
}

PricingInstance mixed_instance(int k) {
  const std::uint64_t seed = 4000 + k;
  const int n = 8 + k % 3;
  switch (k % 4) {
    case 0: return generate_kpp(n, 0.5, seed);
    case 1: return generate_maxsspp(n, 0.3, seed);
    case 2: return generate_minscpp_elements(n, 6, seed);
    default: return generate_kip(n, seed);
  }
}

// ---------------------------------------------------------------------------

Check criterion_pricing(const std::vector<Named>& insts, const Sweep& s) {
  Check c;
  match_oracle(c, insts, s);
  return c;
}

Check criterion_kip(const std::vector<Named>& insts, const Sweep& s) {
  Check c;
  match_oracle(c, insts, s);
  return c;
}

Check criterion_worked_examples() {
  using namespace testing_support;
  Check c;
  const auto inst = small_kpp();
  for (const auto& label : method_labels(4))
    for (const auto& b : kBackends) {
      const auto r = solve_cpp(inst, config(label, 3, b));
      c.expect(std::abs(r.revenue - 1.5) <= kTol, label + " " + b + ": revenue " + fmt(r.revenue));
      c.expect(format_set(r.response) == "{0,1,2}", label + " " + b + ": response " + format_set(r.response));
    }

  const auto problem = make_follower(inst);
  {
    Rng rng(59);
    auto d = sd_init(*problem, 2, rng);
    c.expect(d.nodes().size() == 7 && arc_strs(d) == kSelectionInitialArcs, "initial selection diagram");
    std::vector<std::string> added;
    for (auto x : {make_set(4, {0, 1, 2}), make_set(4, {1, 3}), make_set(4, {0, 3}), make_set(4, {2, 3})}) {
      const auto a = sd_add_solution(d, x, rng);
      added.push_back(a ? arc_str(d, *a) : "none");
    }
    c.expect(added == kSelectionAddedArcs, "selection diagram added arcs");
  }
  {
    Rng rng(26);
    auto d = dd_init(inst, *problem, 2, identity_grouping(4), rng);
    c.expect(d.nodes().size() == 8 && arc_strs(d) == kDecisionInitialArcs, "initial decision diagram");
    auto a = dd_add_solution(d, inst, make_set(4, {0, 3}));
    c.expect(a.size() == 1 && arc_str(d, a[0]) == "1:2->3:2 {}", "decision diagram arc for {0,3}");
    a = dd_add_solution(d, inst, make_set(4, {1, 3}));
    c.expect(a.size() == 1 && arc_str(d, a[0]) == "1:3->3:2 {1}", "decision diagram arc for {1,3}");
  }
  const auto raw = dd_full(inst, identity_grouping(4), false);
  c.expect(raw.nodes().size() == 11 && raw.arcs().size() == 18, "unsimplified full decision diagram size");
  const auto dd = dd_full(inst, identity_grouping(4), true);
  c.expect(dd.nodes().size() == 10 && dd.arcs().size() == 14, "simplified full decision diagram size");
  c.expect(selection_rows(inst) == kSelectionRows, "selection diagram arc rows");
  c.expect(decision_rows(inst) == kDecisionRows, "decision diagram arc rows");
  return c;
}

Check criterion_diagrams() {
  Check c;
  long paths = 0;
  for (int k = 0; k < 50; ++k) {
    const auto inst = mixed_instance(k);
    const auto problem = make_follower(inst);
    const auto name = std::string(problem_name(inst.kind())) + " #" + std::to_string(k);
    Rng rng(k + 1);

    // Soundness: 200 random p-q paths per instance over several diagrams.
    std::vector<Diagram> ds;
    ds.push_back(dd_full(inst, identity_grouping(inst.n)));
    ds.push_back(dd_full(inst, make_grouping(inst.n, 3, rng), false));
    auto dyn = dd_init(inst, *problem, 4, make_grouping(inst.n, 4, rng), rng);
    auto sd = sd_init(*problem, 4, rng);
    for (int j = 0; j < 5; ++j) {
      const auto x = problem->sample_solution(rng);
      dd_add_solution(dyn, inst, x);
      sd_add_solution(sd, x, rng);
    }
    ds.push_back(std::move(dyn));
    ds.push_back(sd_full(*problem));
    ds.push_back(std::move(sd));
    for (int j = 0; j < 200; ++j) {
      const auto& d = ds[static_cast<std::size_t>(j) % ds.size()];
      std::optional<ItemSet> x;
      while (!(x = random_path(d, rng))) {
      }
      ++paths;
      c.expect(oracle_detail::feasible_bits(inst, to_bits(*x)), name + ": infeasible path " + format_set(*x));
    }

    // Completeness: longest paths of full diagrams equal the follower optimum.
    std::vector<Diagram> full;
    full.push_back(dd_full(inst, identity_grouping(inst.n)));
    full.push_back(dd_full(inst, make_grouping(inst.n, 3, rng)));
    full.push_back(sd_full(*problem));
    auto vf = vf_diagram(inst.n);
    for (auto b : oracle_detail::extremal_solutions(inst, {}))
      vf_add_solution(vf, mask_from_bits(static_cast<std::size_t>(inst.n), b));
    full.push_back(std::move(vf));
    for (int j = 0; j < 100; ++j) {
      const auto t = random_tolls(inst, rng);
      const auto obj = follower_objective(inst, t);
      const double want = enumerated_follower_value(inst, obj);
      for (const auto& d : full) {
        const double got = diagram_longest_path(d, obj, inst.sense()).value;
        c.expect(std::abs(got - want) <= 1e-9, name + " " + diagram_kind_name(d.kind()) + ": longest path " +
                                                   fmt(got) + " vs follower " + fmt(want));
      }
    }
  }
  c.expect(paths == 10000, "path count " + std::to_string(paths));
  return c;
}

Check criterion_iterations(const std::vector<Named>& insts, const Sweep& s) {
  Check c;
  std::vector<std::size_t> extremal;
  for (const auto& x : insts) extremal.push_back(oracle_detail::extremal_solutions(x.inst, {}).size());
  for (const auto& [key, r] : s.runs) {
    const auto& [k, label, backend] = key;
    c.expect(static_cast<std::size_t>(r.stats.cut_rounds) <= extremal[k],
             insts[k].id + " " + label + " " + backend + ": " + std::to_string(r.stats.cut_rounds) +
                 " cut rounds for " + std::to_string(extremal[k]) + " extremal responses");
  }
  return c;
}

// Optimum of the master over the full decision diagram, with the toll
// revenue t_i x_i it collects on each item.
struct MasterOptimum {
  double revenue = 0;
  std::vector<double> collected;
};

MasterOptimum master_optimum(const PricingInstance& inst, const std::vector<double>& M) {
  const auto mp = build_master(inst, dd_full(inst, identity_grouping(inst.n)), M);
  const auto sol = milp::solve_milp(mp.model, nullptr);
  if (sol.status != milp::MilpStatus::optimal) throw Error("master not solved to optimality");
  MasterOptimum out{sol.objective, std::vector<double>(static_cast<std::size_t>(inst.n), 0.0)};
  for (int i = 0; i < inst.n; ++i)
    if (mp.t_var[i] >= 0 && sol.values[mp.x_var[i]] > 0.5) out.collected[i] = sol.values[mp.t_var[i]];
  return out;
}

Check criterion_big_m() {
  Check c;
  int changed = 0, positive = 0;
  for (int k = 0; k < 50; ++k) {
    const std::uint64_t seed = 5000 + k;
    const auto inst = generate_minscpp_elements(6 + k % 5, 6 + k % 3, seed);
    const auto name = "minscpp #" + std::to_string(k);
    const auto M = mccormick_bounds(inst);
    const std::vector<double> loose(static_cast<std::size_t>(inst.n), 1e5);
    const auto opt = brute_force_cpp(inst, loose);
    for (int i = 0; i < inst.n; ++i)
      if (inst.is_tolled(i) && opt.response.test(i))
        c.expect(opt.tolls[i] <= M[i] + kTol,
                 name + ": t" + std::to_string(i) + " = " + fmt(opt.tolls[i]) + " exceeds M = " + fmt(M[i]));
    c.expect(std::abs(brute_force_cpp(inst, M).revenue - opt.revenue) <= kTol, name + ": bounds cut off the optimum");
    c.expect(std::abs(master_optimum(inst, M).revenue - opt.revenue) <= kTol, name + ": master optimum differs from oracle");
    if (opt.revenue <= kTol) continue;
    ++positive;
    // Tighten each bound below the toll the current optimum collects on it. An
    // alternative optimum may survive a round, so repeat on the new optimum.
    auto tight = M;
    std::vector<double> collected(static_cast<std::size_t>(inst.n), 0.0);
    for (int i = 0; i < inst.n; ++i)
      if (inst.is_tolled(i) && opt.response.test(i)) collected[i] = opt.tolls[i];
    double reduced = opt.revenue;
    for (int round = 0; round < 8 && reduced >= opt.revenue - kTol; ++round) {
      for (int i = 0; i < inst.n; ++i)
        if (collected[i] > kTol) tight[i] = std::min(tight[i], 0.5 * collected[i]);
      const auto mo = master_optimum(inst, tight);
      reduced = mo.revenue;
      collected = mo.collected;
    }
    c.expect(reduced < opt.revenue - kTol,
             name + ": tightened bounds keep the optimum " + fmt(opt.revenue) + " (got " + fmt(reduced) + ")");
    if (reduced < opt.revenue - kTol) ++changed;
  }
  c.notes.insert(c.notes.begin(), std::to_string(changed) + "/" + std::to_string(positive) +
                                      " instances changed under tightened bounds");
  return c;
}

Check criterion_kip_calls() {
  Check c;
  const auto insts = kip_instances(30, 18, 18, 6000);
  std::vector<double> vf_calls, dd_calls;
  int vf_solved = 0, dd_solved = 0;
  for (const auto& x : insts) {
    for (const std::string label : {"vf", "dd:10"}) {
      auto cfg = config(label, x.seed, "native");
      cfg.time_limit = 60;
      const auto r = solve_kip(x.inst, cfg);
      c.expect(verify(x.inst, r).ok, x.id + " " + label + ": solution does not verify");
      (label == "vf" ? vf_calls : dd_calls).push_back(static_cast<double>(r.stats.callback_calls));
      if (r.status == SolveStatus::optimal) ++(label == "vf" ? vf_solved : dd_solved);
    }
  }
  const double gv = io::geometric_mean(vf_calls), gd = io::geometric_mean(dd_calls);
  c.expect(gd <= gv, "geometric mean callback calls dd:10 " + fmt(gd) + " > vf " + fmt(gv));
  c.notes.insert(c.notes.begin(), "geometric mean callback calls vf " + fmt(gv) + " (" + std::to_string(vf_solved) +
                                      "/30 optimal), dd:10 " + fmt(gd) + " (" + std::to_string(dd_solved) +
                                      "/30 optimal)");
  return c;
}

Check criterion_backends(const std::vector<Named>& cpp, const Sweep& a, const std::vector<Named>& kip, const Sweep& b) {
  Check c;
  auto compare = [&](const std::vector<Named>& insts, const Sweep& s) {
    for (std::size_t k = 0; k < insts.size(); ++k)
      for (const auto& label : method_labels(insts[k].inst.n)) {
        const auto& n = s.runs.at({k, label, "native"});
        const auto& i = s.runs.at({k, label, "iterative"});
        c.expect(n.status == i.status && std::abs(n.revenue - i.revenue) <= kTol,
                 insts[k].id + " " + label + ": native " + fmt(n.revenue) + " vs iterative " + fmt(i.revenue));
      }
  };
  compare(cpp, a);
  compare(kip, b);
  return c;
}

bool report(int id, const std::string& title, const std::function<Check()>& run) {
  const auto start = std::chrono::steady_clock::now();
  Check c;
  std::string error;
  try {
    c = run();
  } catch (const std::exception& e) {
    error = e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool ok = error.empty() && c.ok();
  std::printf("criterion %d: %s  %s (%ld checks, %ld failed, %.1fs)\n", id, ok ? "PASS" : "FAIL", title.c_str(),
              c.checked, c.failed, secs);
  if (!error.empty()) std::printf("    error: %s\n", error.c_str());
  for (const auto& n : c.notes) std::printf("    %s\n", n.c_str());
  std::fflush(stdout);
  return ok;
}

}  // namespace

int main() {
  bool all = true;
  std::vector<Named> cpp, kip;
  Sweep cpp_runs, kip_runs;
  all &= report(1, "pricing methods match the oracle", [&] {
    cpp = pricing_instances();
    cpp_runs = sweep(cpp, false);
    return criterion_pricing(cpp, cpp_runs);
  });
  all &= report(2, "interdiction methods match the oracle", [&] {
    kip = kip_instances(100, 6, 12, 7000);
    kip_runs = sweep(kip, true);
    return criterion_kip(kip, kip_runs);
  });
  all &= report(3, "worked examples reproduce", criterion_worked_examples);
  all &= report(4, "diagram soundness and completeness", criterion_diagrams);
  all &= report(5, "cut rounds bounded by extremal responses", [&] { return criterion_iterations(cpp, cpp_runs); });
  all &= report(6, "set cover toll bounds valid and binding", criterion_big_m);
  all &= report(7, "interdiction callback calls dd:10 vs vf", criterion_kip_calls);
  all &= report(8, "callback and iterative modes agree",
                [&] { return criterion_backends(cpp, cpp_runs, kip, kip_runs); });
  std::printf("%s\n", all ? "ALL PASS" : "SOME FAILED");
  return all ? 0 : 1;
}
