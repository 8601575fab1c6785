#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "dpprice/core/error.hpp"
#include "dpprice/core/instance.hpp"
#include "dpprice/core/rng.hpp"

namespace dpprice {

namespace gen_detail {

inline std::int64_t round_int(double x) { return static_cast<std::int64_t>(std::llround(x)); }

inline ItemSet random_subset(Rng& rng, int n, int k) {
  auto perm = rng.permutation(n);
  ItemSet s(static_cast<std::size_t>(n));
  for (int i = 0; i < k; ++i) s.set(perm[i]);
  return s;
}

}  // namespace gen_detail

// Knapsack pricing: w ~ U{1..100}, v/w ~ U[0.75, 1.25], round(r n) tolled items
// with doubled value, C = r * sum(w). Rounding happens once at the end.
inline PricingInstance generate_kpp(int n, double r, std::uint64_t seed) {
  using gen_detail::round_int;
  if (n < 2) throw ValidationError("generate_kpp needs n >= 2");
  if (!(r > 0 && r < 1)) throw ValidationError("generate_kpp needs r in (0,1)");
  Rng rng(seed);
  std::vector<std::int64_t> w(static_cast<std::size_t>(n));
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    w[i] = rng.uniform_int(1, 100);
    v[i] = static_cast<double>(w[i]) * rng.uniform_real(0.75, 1.25);
  }
  const auto k = static_cast<int>(round_int(r * n));
  ItemSet tolled = gen_detail::random_subset(rng, n, k);
  for_each_item(tolled, [&](int i) { v[i] *= 2.0; });
  const auto total = std::accumulate(w.begin(), w.end(), std::int64_t{0});
  PricingInstance inst;
  inst.n = n;
  for (double x : v) inst.values.push_back(round_int(x));
  inst.tolled = std::move(tolled);
  inst.payload = KnapsackData{std::move(w), round_int(r * static_cast<double>(total))};
  inst.validate();
  return inst;
}

// Stable set pricing on G(n, d): 40% tolled, v ~ U[50, 150], tolled values x1.3.
inline PricingInstance generate_maxsspp(int n, double d, std::uint64_t seed) {
  using gen_detail::round_int;
  if (n < 1) throw ValidationError("generate_maxsspp needs n >= 1");
  if (d < 0 || d > 1) throw ValidationError("generate_maxsspp needs d in [0,1]");
  Rng rng(seed);
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (rng.bernoulli(d)) edges.emplace_back(i, j);
  std::vector<double> v(static_cast<std::size_t>(n));
  for (auto& x : v) x = rng.uniform_real(50, 150);
  ItemSet tolled = gen_detail::random_subset(rng, n, static_cast<int>(round_int(0.4 * n)));
  for_each_item(tolled, [&](int i) { v[i] *= 1.3; });
  PricingInstance inst;
  inst.n = n;
  for (double x : v) inst.values.push_back(round_int(x));
  inst.tolled = std::move(tolled);
  inst.payload = GraphData::from_edges(n, std::move(edges));
  inst.validate();
  return inst;
}

// Set cover pricing with an explicit element count. Each element joins each set
// with probability 0.23; elements left uncovered join one random set. The
// toll-free family is a greedy subcover padded with random sets up to 72% of
// the items; the remaining sets are tolled and their values divided by 2.3.
inline PricingInstance generate_minscpp_elements(int n_sets, int n_elements, std::uint64_t seed) {
  using gen_detail::round_int;
  if (n_sets < 1 || n_elements < 1) throw ValidationError("generate_minscpp needs positive sizes");
  Rng rng(seed);
  const auto ne = static_cast<std::size_t>(n_elements);
  std::vector<double> we(ne);
  for (auto& x : we) x = rng.uniform_real(50, 85);
  std::vector<ItemSet> sets(static_cast<std::size_t>(n_sets), ItemSet(ne));
  for (auto& s : sets)
    for (std::size_t e = 0; e < ne; ++e)
      if (rng.bernoulli(0.23)) s.set(e);
  ItemSet covered(ne);
  for (const auto& s : sets) covered |= s;
  for (std::size_t e = 0; e < ne; ++e)
    if (!covered.test(e)) sets[rng.below(static_cast<std::uint64_t>(n_sets))].set(e);

  std::vector<double> v(static_cast<std::size_t>(n_sets));
  for (int i = 0; i < n_sets; ++i) {
    double s = 0;
    for_each_item(sets[i], [&](int e) { s += we[e]; });
    v[i] = s * rng.uniform_real(0.9, 1.1);
  }

  ItemSet free_sets(static_cast<std::size_t>(n_sets));
  ItemSet uncovered = full_set(ne);
  const auto order = rng.permutation(n_sets);
  while (uncovered.any()) {
    int pick = -1;
    std::size_t gain = 0;
    for (int i : order) {
      if (free_sets.test(i)) continue;
      const auto g = (sets[i] & uncovered).count();
      if (g > gain) {
        gain = g;
        pick = i;
      }
    }
    free_sets.set(pick);
    uncovered -= sets[pick];
  }
  const auto free_target = n_sets - static_cast<int>(round_int(0.28 * n_sets));
  for (int i : order) {
    if (static_cast<int>(free_sets.count()) >= free_target) break;
    free_sets.set(i);
  }
  ItemSet tolled = ~free_sets;
  for_each_item(tolled, [&](int i) { v[i] /= 2.3; });

  PricingInstance inst;
  inst.n = n_sets;
  for (double x : v) inst.values.push_back(round_int(x));
  inst.tolled = std::move(tolled);
  inst.payload = SetCoverData{n_elements, std::move(sets), std::move(we)};
  inst.validate();
  return inst;
}

// ratio = |I| / |E|.
inline PricingInstance generate_minscpp(int n_sets, double ratio, std::uint64_t seed) {
  if (!(ratio > 0)) throw ValidationError("generate_minscpp needs ratio > 0");
  const auto ne = std::max<std::int64_t>(1, gen_detail::round_int(n_sets / ratio));
  return generate_minscpp_elements(n_sets, static_cast<int>(ne), seed);
}

// Knapsack interdiction in the style of DeNegre's instances: v, w, W ~ U{1..100},
// c = round(sum(w)/2), C = round(sum(W)/2).
inline PricingInstance generate_kip(int n, std::uint64_t seed) {
  using gen_detail::round_int;
  if (n < 1) throw ValidationError("generate_kip needs n >= 1");
  Rng rng(seed);
  std::vector<std::int64_t> v(static_cast<std::size_t>(n)), w(v.size()), W(v.size());
  for (int i = 0; i < n; ++i) {
    v[i] = rng.uniform_int(1, 100);
    w[i] = rng.uniform_int(1, 100);
    W[i] = rng.uniform_int(1, 100);
  }
  const auto sw = std::accumulate(w.begin(), w.end(), std::int64_t{0});
  const auto sW = std::accumulate(W.begin(), W.end(), std::int64_t{0});
  return make_kip(std::move(v), std::move(w), round_int(0.5 * static_cast<double>(sw)), std::move(W),
                  round_int(0.5 * static_cast<double>(sW)));
}

}  // namespace dpprice
