#pragma once

#include <cstdint>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include <boost/dynamic_bitset.hpp>

namespace dpprice {

using ItemSet = boost::dynamic_bitset<std::uint64_t>;

inline ItemSet make_set(std::size_t n, std::initializer_list<int> items) {
  ItemSet s(n);
  for (int i : items) s.set(static_cast<std::size_t>(i));
  return s;
}

inline ItemSet make_set(std::size_t n, const std::vector<int>& items) {
  ItemSet s(n);
  for (int i : items) s.set(static_cast<std::size_t>(i));
  return s;
}

inline ItemSet full_set(std::size_t n) {
  ItemSet s(n);
  s.set();
  return s;
}

inline std::vector<int> to_indices(const ItemSet& s) {
  std::vector<int> out;
  out.reserve(s.count());
  for (auto i = s.find_first(); i != ItemSet::npos; i = s.find_next(i))
    out.push_back(static_cast<int>(i));
  return out;
}

template <class F>
void for_each_item(const ItemSet& s, F&& f) {
  for (auto i = s.find_first(); i != ItemSet::npos; i = s.find_next(i))
    f(static_cast<int>(i));
}

// Subset test that tolerates the empty set on either side.
inline bool is_subset(const ItemSet& a, const ItemSet& b) { return a.is_subset_of(b); }

inline ItemSet mask_from_bits(std::size_t n, std::uint64_t bits) {
  ItemSet s(n);
  for (std::size_t i = 0; i < n; ++i)
    if (bits >> i & 1U) s.set(i);
  return s;
}

inline std::string format_set(const ItemSet& s) {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for_each_item(s, [&](int i) {
    if (!first) os << ',';
    os << i;
    first = false;
  });
  os << '}';
  return os.str();
}

struct ItemSetLess {
  bool operator()(const ItemSet& a, const ItemSet& b) const {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  }
};

}  // namespace dpprice
