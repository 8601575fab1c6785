#include <gtest/gtest.h>

#include "dpprice/dpprice.hpp"

using namespace dpprice;
using namespace dpprice::milp;

namespace {

Variable cont(std::string name, double lo = 0, double hi = kInf) {
  return {std::move(name), VarKind::auxiliary, lo, hi, false};
}
Variable bin(std::string name) { return {std::move(name), VarKind::selection, 0, 1, true}; }
Variable integer(std::string name, double lo, double hi) { return {std::move(name), VarKind::auxiliary, lo, hi, true}; }

MilpSolution lp_only(const ModelSpec& m) { return solve_milp(m, nullptr); }

}  // namespace

TEST(Simplex, SingleBound) {
  ModelSpec m;
  const int x = m.add_variable(cont("x"));
  m.add_row({{{x, 1}}, RowSense::le, 3, "c"});
  m.set_objective(ObjSense::maximize, {{x, 1}});
  const auto s = lp_only(m);
  ASSERT_EQ(s.status, MilpStatus::optimal);
  EXPECT_NEAR(s.objective, 3, 1e-9);
}

TEST(Simplex, SmallKppTollLp) {
  ModelSpec m;
  int t[3];
  for (int i = 0; i < 3; ++i) t[i] = m.add_variable(cont("t" + std::to_string(i)));
  m.add_row({{{t[0], 1}, {t[1], 1}}, RowSense::le, 1, ""});
  m.add_row({{{t[0], 1}, {t[2], 1}}, RowSense::le, 1, ""});
  m.add_row({{{t[1], 1}, {t[2], 1}}, RowSense::le, 1, ""});
  m.set_objective(ObjSense::maximize, {{t[0], 1}, {t[1], 1}, {t[2], 1}});
  const auto s = lp_only(m);
  ASSERT_EQ(s.status, MilpStatus::optimal);
  EXPECT_NEAR(s.objective, 1.5, 1e-9);
}

TEST(Simplex, EmptyModel) {
  ModelSpec m;
  m.set_objective(ObjSense::maximize, {});
  const auto s = lp_only(m);
  ASSERT_EQ(s.status, MilpStatus::optimal);
  EXPECT_EQ(s.objective, 0);
}

TEST(Simplex, FreeVariablesEqualitiesAndMinimize) {
  // min x + y  s.t. x - y = 2, x + y >= -4, x free, -5 <= y <= 5  -> y = -3, x = -1, obj -4
  ModelSpec m;
  const int x = m.add_variable(cont("x", -kInf, kInf));
  const int y = m.add_variable(cont("y", -5, 5));
  m.add_row({{{x, 1}, {y, -1}}, RowSense::eq, 2, ""});
  m.add_row({{{x, 1}, {y, 1}}, RowSense::ge, -4, ""});
  m.set_objective(ObjSense::minimize, {{x, 1}, {y, 1}});
  const auto s = lp_only(m);
  ASSERT_EQ(s.status, MilpStatus::optimal);
  EXPECT_NEAR(s.objective, -4, 1e-9);
  EXPECT_NEAR(s.values[x] - s.values[y], 2, 1e-9);
}

TEST(Simplex, DetectsInfeasibleAndUnbounded) {
  ModelSpec a;
  const int x = a.add_variable(cont("x"));
  a.add_row({{{x, 1}}, RowSense::ge, 2, ""});
  a.add_row({{{x, 1}}, RowSense::le, 1, ""});
  a.set_objective(ObjSense::maximize, {{x, 1}});
  EXPECT_EQ(lp_only(a).status, MilpStatus::infeasible);

  ModelSpec b;
  const int u = b.add_variable(cont("u"));
  const int v = b.add_variable(cont("v"));
  b.add_row({{{u, 1}, {v, -1}}, RowSense::le, 1, ""});
  b.set_objective(ObjSense::maximize, {{u, 1}});
  EXPECT_EQ(lp_only(b).status, MilpStatus::unbounded);
}

TEST(Simplex, RandomLpsMatchExactRationalSolver) {
  Rng rng(2024);
  int checked = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + static_cast<int>(rng.below(6));
    const int m = static_cast<int>(rng.below(7));
    std::vector<std::vector<mpq_class>> A(m, std::vector<mpq_class>(n));
    std::vector<mpq_class> b(m), c(n);
    ModelSpec model;
    for (int j = 0; j < n; ++j) model.add_variable(cont("x" + std::to_string(j)));
    for (int i = 0; i < m; ++i) {
      Row r;
      for (int j = 0; j < n; ++j) {
        const auto a = rng.uniform_int(-3, 5);
        A[i][j] = a;
        if (a != 0) r.terms.push_back({j, static_cast<double>(a)});
      }
      const auto rhs = rng.uniform_int(-4, 10);
      b[i] = rhs;
      r.rhs = static_cast<double>(rhs);
      r.sense = RowSense::le;
      model.add_row(std::move(r));
    }
    std::vector<Term> obj;
    for (int j = 0; j < n; ++j) {
      const auto cj = rng.uniform_int(-2, 4);
      c[j] = cj;
      obj.push_back({j, static_cast<double>(cj)});
    }
    model.set_objective(ObjSense::maximize, obj);
    const auto exact = solve_rational_lp(A, b, c);
    const auto got = lp_only(model);
    switch (exact.status) {
      case RationalLpResult::Status::optimal:
        ASSERT_EQ(got.status, MilpStatus::optimal) << "trial " << trial;
        EXPECT_NEAR(got.objective, exact.value.get_d(), 1e-7) << "trial " << trial;
        EXPECT_TRUE(model.is_feasible(got.values, 1e-7));
        ++checked;
        break;
      case RationalLpResult::Status::infeasible: EXPECT_EQ(got.status, MilpStatus::infeasible) << trial; break;
      case RationalLpResult::Status::unbounded: EXPECT_EQ(got.status, MilpStatus::unbounded) << trial; break;
    }
  }
  EXPECT_GT(checked, 50);
}

TEST(Simplex, WarmStartAfterCutsAndBoundChanges) {
  Rng rng(77);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 4;
    std::vector<double> cost(n), lo(n, 0.0), hi(n, 10.0);
    for (auto& c : cost) c = static_cast<double>(rng.uniform_int(-1, 5));
    LpTableau warm(cost, lo, hi);
    std::vector<Row> rows;
    auto random_row = [&] {
      Row r;
      for (int j = 0; j < n; ++j) r.terms.push_back({j, static_cast<double>(rng.uniform_int(0, 4))});
      r.sense = RowSense::le;
      r.rhs = static_cast<double>(rng.uniform_int(3, 20));
      return r;
    };
    for (int k = 0; k < 3; ++k) {
      rows.push_back(random_row());
      warm.add_row(rows.back());
    }
    ASSERT_EQ(warm.solve(), LpStatus::optimal);
    for (int step = 0; step < 5; ++step) {
      rows.push_back(random_row());
      warm.add_row(rows.back());
      const int j = static_cast<int>(rng.below(n));
      const double a = static_cast<double>(rng.uniform_int(0, 3)), b = a + static_cast<double>(rng.uniform_int(0, 5));
      lo[j] = a;
      hi[j] = b;
      warm.set_bounds(j, a, b);
      LpTableau cold(cost, lo, hi);
      for (const auto& r : rows) cold.add_row(r);
      const auto sw = warm.solve(), sc = cold.solve();
      ASSERT_EQ(sw, sc) << "trial " << trial << " step " << step;
      if (sc == LpStatus::optimal) {
        EXPECT_NEAR(warm.objective(), cold.objective(), 1e-7);
      }
      if (sc == LpStatus::infeasible) {
        // relax again so later steps stay interesting
        for (int jj = 0; jj < n; ++jj) {
          lo[jj] = 0;
          hi[jj] = 10;
          warm.set_bounds(jj, 0, 10);
        }
        rows.resize(3);
        break;
      }
    }
  }
}

TEST(Simplex, DegenerateLpTerminates) {
  // many identical tight rows through the origin
  ModelSpec m;
  for (int j = 0; j < 6; ++j) m.add_variable(cont("x" + std::to_string(j)));
  Rng rng(5);
  for (int i = 0; i < 30; ++i) {
    Row r;
    for (int j = 0; j < 6; ++j) r.terms.push_back({j, static_cast<double>(rng.uniform_int(-2, 2))});
    r.rhs = 0;
    r.sense = RowSense::le;
    m.add_row(std::move(r));
  }
  Row box;
  for (int j = 0; j < 6; ++j) box.terms.push_back({j, 1.0});
  box.rhs = 1;
  m.add_row(std::move(box));
  std::vector<Term> obj;
  for (int j = 0; j < 6; ++j) obj.push_back({j, 1.0 + j});
  m.set_objective(ObjSense::maximize, obj);
  const auto s = lp_only(m);
  EXPECT_EQ(s.status, MilpStatus::optimal);
}

namespace {

// Random pure-integer program with boxed variables, checked by enumeration.
struct SmallIp {
  ModelSpec model;
  double best = -kInf;
  bool feasible = false;
};

SmallIp random_ip(Rng& rng) {
  SmallIp ip;
  const int n = 2 + static_cast<int>(rng.below(4));
  std::vector<int> ub(n);
  for (int j = 0; j < n; ++j) {
    ub[j] = 1 + static_cast<int>(rng.below(3));
    ip.model.add_variable(integer("z" + std::to_string(j), 0, ub[j]));
  }
  const int m = 1 + static_cast<int>(rng.below(4));
  for (int i = 0; i < m; ++i) {
    Row r;
    for (int j = 0; j < n; ++j) r.terms.push_back({j, static_cast<double>(rng.uniform_int(-2, 6))});
    r.rhs = static_cast<double>(rng.uniform_int(0, 12)) + 0.5 * static_cast<double>(rng.below(2));
    r.sense = rng.below(4) == 0 ? RowSense::ge : RowSense::le;
    if (r.sense == RowSense::ge) r.rhs = static_cast<double>(rng.uniform_int(-3, 4));
    ip.model.add_row(std::move(r));
  }
  std::vector<Term> obj;
  for (int j = 0; j < n; ++j) obj.push_back({j, static_cast<double>(rng.uniform_int(-3, 7))});
  ip.model.set_objective(ObjSense::maximize, obj);
  std::vector<double> z(n, 0.0);
  auto rec = [&](auto&& self, int j) -> void {
    if (j == n) {
      if (ip.model.is_feasible(z, 1e-9)) {
        ip.feasible = true;
        ip.best = std::max(ip.best, ip.model.objective_value(z));
      }
      return;
    }
    for (int v = 0; v <= ub[j]; ++v) {
      z[j] = v;
      self(self, j + 1);
    }
  };
  rec(rec, 0);
  return ip;
}

}  // namespace

TEST(BranchAndBound, RandomIntegerProgramsMatchEnumeration) {
  Rng rng(99);
  for (int trial = 0; trial < 300; ++trial) {
    const auto ip = random_ip(rng);
    const auto s = solve_milp(ip.model, nullptr);
    if (!ip.feasible) {
      EXPECT_EQ(s.status, MilpStatus::infeasible) << trial;
      continue;
    }
    ASSERT_EQ(s.status, MilpStatus::optimal) << trial;
    EXPECT_NEAR(s.objective, ip.best, 1e-6) << trial;
    EXPECT_TRUE(ip.model.is_feasible(s.values, 1e-6));
  }
}

TEST(BranchAndBound, LazyRowsGiveSameOptimumAsFullModel) {
  Rng rng(1234);
  for (int trial = 0; trial < 150; ++trial) {
    const auto ip = random_ip(rng);
    // keep only the first row in the model; the rest arrive through the callback
    ModelSpec partial;
    for (const auto& v : ip.model.variables()) partial.add_variable(v);
    partial.add_row(ip.model.rows()[0]);
    partial.set_objective(ip.model.objective_sense(), ip.model.objective());
    std::vector<Row> hidden(ip.model.rows().begin() + 1, ip.model.rows().end());
    LazyCallback cb = [&](const std::vector<double>& x) {
      CallbackResult r;
      for (const auto& h : hidden)
        if (h.violation(x) > 1e-9) r.cuts.push_back(h);
      return r;
    };
    for (const auto& backend : {"native", "iterative"}) {
      const auto s = BackendRegistry::instance().get(backend).solve(partial, cb, {}, {});
      if (!ip.feasible) {
        EXPECT_EQ(s.status, MilpStatus::infeasible) << trial << backend;
        continue;
      }
      ASSERT_EQ(s.status, MilpStatus::optimal) << trial << backend;
      EXPECT_NEAR(s.objective, ip.best, 1e-6) << trial << backend;
      EXPECT_TRUE(ip.model.is_feasible(s.values, 1e-6)) << trial << backend;
    }
  }
}

TEST(BranchAndBound, CallbackCuttingOneValueOnce) {
  ModelSpec m;
  const int x = m.add_variable(bin("x"));
  m.set_objective(ObjSense::maximize, {{x, 1}});
  int calls = 0;
  bool cut = false;
  LazyCallback cb = [&](const std::vector<double>& v) {
    ++calls;
    CallbackResult r;
    if (!cut && v[x] > 0.5) {
      cut = true;
      r.cuts.push_back({{{x, 1}}, RowSense::le, 0, "no_one"});
    }
    return r;
  };
  const auto s = solve_milp(m, cb);
  ASSERT_EQ(s.status, MilpStatus::optimal);
  EXPECT_LE(calls, 2);
  EXPECT_NEAR(s.objective, 0, 1e-9);
  EXPECT_EQ(s.stats.cuts, 1);
}

TEST(BranchAndBound, SuppliedIncumbentAndHeuristicsAreVerified) {
  ModelSpec m;
  const int x = m.add_variable(bin("x"));
  const int y = m.add_variable(bin("y"));
  m.add_row({{{x, 1}, {y, 1}}, RowSense::le, 1, ""});
  m.set_objective(ObjSense::maximize, {{x, 2}, {y, 1}});
  // infeasible start point is ignored, feasible one is kept
  const auto s = solve_milp(m, nullptr, {{1, 1}, {0, 1}});
  ASSERT_EQ(s.status, MilpStatus::optimal);
  EXPECT_NEAR(s.objective, 2, 1e-9);
}

TEST(BranchAndBound, NodeLimitReportsBoundAndGap) {
  Rng rng(3);
  ModelSpec m;
  const int n = 25;
  Row cap;
  std::vector<Term> obj;
  for (int j = 0; j < n; ++j) {
    m.add_variable(bin("b" + std::to_string(j)));
    cap.terms.push_back({j, static_cast<double>(rng.uniform_int(10, 40))});
    obj.push_back({j, static_cast<double>(rng.uniform_int(10, 40))});
  }
  cap.rhs = 201.5;
  m.add_row(cap);
  m.set_objective(ObjSense::maximize, obj);
  MilpOptions opt;
  opt.node_limit = 3;
  const auto s = solve_milp(m, nullptr, {std::vector<double>(n, 0.0)}, opt);
  EXPECT_EQ(s.status, MilpStatus::limit);
  EXPECT_GE(s.bound, s.objective - 1e-9);
  EXPECT_GE(s.gap, 0);
  const auto full = solve_milp(m, nullptr);
  EXPECT_GE(s.bound, full.objective - 1e-6);
}

TEST(Backend, RegistryKnowsBuiltIns) {
  auto names = BackendRegistry::instance().names();
  EXPECT_NE(std::find(names.begin(), names.end(), "native"), names.end());
  EXPECT_NE(std::find(names.begin(), names.end(), "iterative"), names.end());
  EXPECT_THROW(BackendRegistry::instance().get("gurobi"), ConfigError);
}

TEST(Model, RejectsUnknownVariable) {
  ModelSpec m;
  m.add_variable(cont("x"));
  EXPECT_THROW(m.add_row({{{3, 1.0}}, RowSense::le, 0, ""}), ValidationError);
  EXPECT_THROW(m.add_variable(cont("bad", 2, 1)), ValidationError);
}

TEST(Model, LpDump) {
  ModelSpec m;
  const int x = m.add_variable(bin("x"));
  const int y = m.add_variable(cont("y", -kInf, kInf));
  const int z = m.add_variable(cont("z", 0, 0));
  m.add_row({{{x, 2}, {y, -1}}, RowSense::ge, 1.5, "c1"});
  m.add_row({{{z, 1}}, RowSense::eq, 0, ""});
  m.set_objective(ObjSense::minimize, {{y, 1}});
  EXPECT_EQ(write_lp(m),
            "Minimize\n obj: y\nSubject To\n c1: 2 x - y >= 1.5\n r1: z = 0\nBounds\n 0 <= x <= 1\n y free\n z = 0\n"
            "General\n x\nEnd\n");
}
