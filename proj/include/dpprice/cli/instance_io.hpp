#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "dpprice/core/error.hpp"
#include "dpprice/core/instance.hpp"

namespace dpprice::io {

using nlohmann::json;

inline constexpr int kFormatVersion = 1;

struct Provenance {
  std::string generator;
  json params = json::object();
  std::uint64_t seed = 0;
};

struct InstanceFile {
  PricingInstance instance;
  std::optional<Provenance> provenance;
};

namespace io_detail {

template <class T>
T field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ValidationError(std::string("missing field: ") + key);
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ValidationError(std::string("bad field: ") + key);
  }
}

inline ItemSet set_from_indices(std::size_t n, const std::vector<int>& idx, const char* what) {
  ItemSet s(n);
  for (int i : idx) {
    if (i < 0 || static_cast<std::size_t>(i) >= n) throw ValidationError(std::string("index out of range in ") + what);
    if (s.test(i)) throw ValidationError(std::string("duplicate index in ") + what);
    s.set(i);
  }
  return s;
}

}  // namespace io_detail

inline json to_json(const InstanceFile& f) {
  const auto& inst = f.instance;
  json j;
  j["format_version"] = kFormatVersion;
  j["problem"] = problem_name(inst.kind());
  j["n"] = inst.n;
  j["v"] = inst.values;
  j["tolled"] = to_indices(inst.tolled);
  json p;
  switch (inst.kind()) {
    case ProblemKind::kpp:
      p["weights"] = inst.knapsack().weights;
      p["capacity"] = inst.knapsack().capacity;
      break;
    case ProblemKind::maxsspp: {
      p["edges"] = json::array();
      for (auto [a, b] : inst.graph().edges) p["edges"].push_back({a, b});
      break;
    }
    case ProblemKind::minscpp: {
      const auto& d = inst.set_cover();
      p["elements"] = d.num_elements;
      p["sets"] = json::array();
      for (const auto& s : d.sets) p["sets"].push_back(to_indices(s));
      if (!d.element_weights.empty()) p["element_weights"] = d.element_weights;
      break;
    }
    case ProblemKind::kip: {
      const auto& k = inst.kip();
      p["weights"] = k.weights;
      p["capacity"] = k.capacity;
      p["leader_weights"] = k.leader_weights;
      p["leader_capacity"] = k.leader_capacity;
      break;
    }
  }
  j["payload"] = p;
  if (f.provenance)
    j["provenance"] = {{"generator", f.provenance->generator},
                       {"params", f.provenance->params},
                       {"seed", f.provenance->seed}};
  return j;
}

inline InstanceFile from_json(const json& j) {
  using io_detail::field;
  const auto version = field<int>(j, "format_version");
  if (version != kFormatVersion) throw ValidationError("unsupported format_version " + std::to_string(version));
  const auto kind = parse_problem(field<std::string>(j, "problem"));
  const auto n = field<int>(j, "n");
  if (n < 0) throw ValidationError("n must be nonnegative");
  const auto values = field<std::vector<std::int64_t>>(j, "v");
  const auto tolled = field<std::vector<int>>(j, "tolled");
  const json p = field<json>(j, "payload");
  if (static_cast<int>(values.size()) != n) throw ValidationError("v must have n entries");
  io_detail::set_from_indices(static_cast<std::size_t>(n), tolled, "tolled");

  InstanceFile f;
  auto& inst = f.instance;
  switch (kind) {
    case ProblemKind::kpp:
      inst = make_kpp(values, tolled, field<std::vector<std::int64_t>>(p, "weights"),
                      field<std::int64_t>(p, "capacity"));
      break;
    case ProblemKind::maxsspp: {
      std::vector<std::pair<int, int>> edges;
      for (const auto& e : field<std::vector<std::vector<int>>>(p, "edges")) {
        if (e.size() != 2) throw ValidationError("edges must be pairs");
        edges.emplace_back(e[0], e[1]);
      }
      inst = make_maxsspp(values, tolled, std::move(edges));
      break;
    }
    case ProblemKind::minscpp: {
      const auto ne = field<int>(p, "elements");
      if (ne < 0) throw ValidationError("elements must be nonnegative");
      std::vector<std::vector<int>> sets = field<std::vector<std::vector<int>>>(p, "sets");
      for (const auto& s : sets) io_detail::set_from_indices(static_cast<std::size_t>(ne), s, "sets");
      inst = make_minscpp(values, tolled, ne, sets);
      if (p.contains("element_weights")) {
        auto we = field<std::vector<double>>(p, "element_weights");
        if (static_cast<int>(we.size()) != ne) throw ValidationError("element_weights must have one entry per element");
        std::get<SetCoverData>(inst.payload).element_weights = std::move(we);
      }
      break;
    }
    case ProblemKind::kip: {
      if (static_cast<int>(tolled.size()) != n) throw ValidationError("every KIP item is interdictable");
      inst = make_kip(values, field<std::vector<std::int64_t>>(p, "weights"), field<std::int64_t>(p, "capacity"),
                      field<std::vector<std::int64_t>>(p, "leader_weights"),
                      field<std::int64_t>(p, "leader_capacity"));
      break;
    }
  }
  if (j.contains("provenance")) {
    const auto& pj = j["provenance"];
    Provenance pr;
    pr.generator = field<std::string>(pj, "generator");
    pr.params = pj.contains("params") ? pj["params"] : json::object();
    pr.seed = field<std::uint64_t>(pj, "seed");
    f.provenance = std::move(pr);
  }
  return f;
}

inline std::string dump(const InstanceFile& f) { return to_json(f).dump(2) + "\n"; }

inline InstanceFile parse(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("malformed instance file: ") + e.what());
  }
  return from_json(j);
}

inline InstanceFile load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

inline void save_instance(const std::string& path, const InstanceFile& f) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << dump(f);
}

}  // namespace dpprice::io
