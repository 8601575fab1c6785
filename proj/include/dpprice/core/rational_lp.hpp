#pragma once

#include <vector>

#include <gmpxx.h>

namespace dpprice {

struct RationalLpResult {
  enum class Status { optimal, infeasible, unbounded };
  Status status = Status::infeasible;
  mpq_class value;
  std::vector<mpq_class> x;
};

// Exact dense simplex for max c.x s.t. A x <= b, x >= 0. Bland's rule on both
// phases; an auxiliary variable handles negative right-hand sides. Only meant
// for the small LPs of the brute-force oracle.
inline RationalLpResult solve_rational_lp(const std::vector<std::vector<mpq_class>>& A,
                                          const std::vector<mpq_class>& b, const std::vector<mpq_class>& c) {
  const std::size_t m = A.size();
  const std::size_t n = c.size();
  const std::size_t art = n + m;
  const std::size_t cols = n + m + 1;
  std::vector<std::vector<mpq_class>> T(m, std::vector<mpq_class>(cols, 0));
  std::vector<mpq_class> rhs(b);
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) T[i][j] = A[i][j];
    T[i][n + i] = 1;
    T[i][art] = -1;
    basis[i] = n + i;
  }

  auto pivot = [&](std::size_t r, std::size_t e) {
    const mpq_class p = T[r][e];
    for (auto& v : T[r]) v /= p;
    rhs[r] /= p;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == r || T[i][e] == 0) continue;
      const mpq_class f = T[i][e];
      for (std::size_t j = 0; j < cols; ++j)
        if (T[r][j] != 0) T[i][j] -= f * T[r][j];
      rhs[i] -= f * rhs[r];
    }
    basis[r] = e;
  };

  // Returns false when unbounded.
  auto run = [&](const std::vector<mpq_class>& obj, bool allow_art) {
    while (true) {
      std::vector<bool> is_basic(cols, false);
      for (auto bv : basis) is_basic[bv] = true;
      std::size_t enter = cols;
      for (std::size_t j = 0; j < cols && enter == cols; ++j) {
        if (is_basic[j] || (j == art && !allow_art)) continue;
        mpq_class d = obj[j];
        for (std::size_t i = 0; i < m; ++i)
          if (T[i][j] != 0) d -= obj[basis[i]] * T[i][j];
        if (d > 0) enter = j;
      }
      if (enter == cols) return true;
      std::size_t leave = m;
      mpq_class best;
      for (std::size_t i = 0; i < m; ++i) {
        if (T[i][enter] <= 0) continue;
        mpq_class ratio = rhs[i] / T[i][enter];
        if (leave == m || ratio < best || (ratio == best && basis[i] < basis[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave == m) return false;
      pivot(leave, enter);
    }
  };

  RationalLpResult res;
  std::size_t worst = m;
  for (std::size_t i = 0; i < m; ++i)
    if (rhs[i] < 0 && (worst == m || rhs[i] < rhs[worst])) worst = i;
  if (worst != m) {
    pivot(worst, art);
    std::vector<mpq_class> aux(cols, 0);
    aux[art] = -1;
    run(aux, true);
    for (std::size_t i = 0; i < m; ++i) {
      if (basis[i] != art) continue;
      if (rhs[i] != 0) return res;
      for (std::size_t j = 0; j < art; ++j)
        if (T[i][j] != 0) {
          pivot(i, j);
          break;
        }
    }
    for (std::size_t i = 0; i < m; ++i)
      if (basis[i] == art && rhs[i] != 0) return res;
  }
  std::vector<mpq_class> obj(cols, 0);
  for (std::size_t j = 0; j < n; ++j) obj[j] = c[j];
  if (!run(obj, false)) {
    res.status = RationalLpResult::Status::unbounded;
    return res;
  }
  res.status = RationalLpResult::Status::optimal;
  res.x.assign(n, 0);
  for (std::size_t i = 0; i < m; ++i)
    if (basis[i] < n) res.x[basis[i]] = rhs[i];
  res.value = 0;
  for (std::size_t j = 0; j < n; ++j) res.value += c[j] * res.x[j];
  return res;
}

}  // namespace dpprice
