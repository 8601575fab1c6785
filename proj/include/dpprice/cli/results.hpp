#pragma once

#include <cmath>
#include <iomanip>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "dpprice/core/error.hpp"
#include "dpprice/core/result.hpp"
#include "dpprice/driver/driver.hpp"

namespace dpprice::io {

// One CSV row per (instance, method) run. `param` is N for sd and W for dd,
// `layers` is m (0 for one item per layer).
struct ResultRow {
  std::string instance;
  std::string method;
  int param = 0;
  int layers = 0;
  std::string mode = "callback";
  std::string status;
  double objective = 0;
  double bound = 0;
  double gap = 0;
  double total_time = 0;
  double callback_time = 0;
  long callback_calls = 0;
  long cuts = 0;
  long nodes = 0;
  std::uint64_t seed = 0;
};

inline const std::vector<std::string>& result_columns() {
  static const std::vector<std::string> cols{"instance",   "method",     "param", "layers",        "mode",
                                             "status",     "objective",  "bound", "gap",           "total_time",
                                             "callback_time", "callback_calls", "cuts", "nodes",   "seed"};
  return cols;
}

inline std::string mode_of_backend(const std::string& backend) { return backend == "native" ? "callback" : backend; }

inline std::string backend_of_mode(const std::string& mode) {
  if (mode == "callback" || mode == "native") return "native";
  if (mode == "iterative") return "iterative";
  throw ConfigError("unknown mode: " + mode);
}

inline ResultRow make_row(const std::string& instance, const MethodConfig& cfg, const SolveResult& r) {
  ResultRow row;
  row.instance = instance;
  row.method = method_name(cfg.method);
  row.param = cfg.method == Method::sd ? cfg.pairs : cfg.method == Method::dd ? cfg.width : 0;
  row.layers = cfg.method == Method::dd ? cfg.layers : 0;
  row.mode = mode_of_backend(cfg.backend);
  row.status = status_name(r.status);
  row.objective = r.revenue;
  row.bound = r.bound;
  row.gap = r.gap;
  row.total_time = r.stats.total_time;
  row.callback_time = r.stats.callback_time;
  row.callback_calls = r.stats.callback_calls;
  row.cuts = r.stats.cuts_added;
  row.nodes = r.stats.bb_nodes;
  row.seed = cfg.seed;
  return row;
}

inline std::string csv_header() {
  std::string s;
  for (const auto& c : result_columns()) s += (s.empty() ? "" : ",") + c;
  return s;
}

namespace results_detail {

inline std::string num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return os.str();
}

inline double parse_num(const std::string& s) {
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::logic_error&) {
    throw ValidationError("bad number in results row: " + s);
  }
  if (used != s.size()) throw ValidationError("bad number in results row: " + s);
  return v;
}

}  // namespace results_detail

// Instance ids are written as given; they must not contain commas.
inline std::string csv_row(const ResultRow& r) {
  using results_detail::num;
  if (r.instance.find(',') != std::string::npos) throw ValidationError("instance id contains a comma");
  std::ostringstream os;
  os << r.instance << ',' << r.method << ',' << r.param << ',' << r.layers << ',' << r.mode << ',' << r.status << ','
     << num(r.objective) << ',' << num(r.bound) << ',' << num(r.gap) << ',' << num(r.total_time) << ','
     << num(r.callback_time) << ',' << r.callback_calls << ',' << r.cuts << ',' << r.nodes << ',' << r.seed;
  return os.str();
}

inline ResultRow parse_csv_row(const std::string& line) {
  using results_detail::parse_num;
  std::vector<std::string> f;
  std::stringstream ss(line);
  for (std::string x; std::getline(ss, x, ',');) f.push_back(x);
  if (!line.empty() && line.back() == ',') f.emplace_back();
  if (f.size() != result_columns().size()) throw ValidationError("results row has the wrong number of fields");
  ResultRow r;
  r.instance = f[0];
  r.method = f[1];
  r.param = static_cast<int>(parse_num(f[2]));
  r.layers = static_cast<int>(parse_num(f[3]));
  r.mode = f[4];
  r.status = f[5];
  r.objective = parse_num(f[6]);
  r.bound = parse_num(f[7]);
  r.gap = parse_num(f[8]);
  r.total_time = parse_num(f[9]);
  r.callback_time = parse_num(f[10]);
  r.callback_calls = static_cast<long>(parse_num(f[11]));
  r.cuts = static_cast<long>(parse_num(f[12]));
  r.nodes = static_cast<long>(parse_num(f[13]));
  r.seed = static_cast<std::uint64_t>(std::stoull(f[14]));
  return r;
}

// Geometric mean with every value below `lift` raised to `lift`.
inline double geometric_mean(const std::vector<double>& v, double lift = 1.0) {
  if (v.empty()) return 0;
  double s = 0;
  for (double x : v) s += std::log(std::max(x, lift));
  return std::exp(s / static_cast<double>(v.size()));
}

struct MethodSummary {
  std::string method;  // "vf", "sd:N", "dd:W" or "dd:W:m", plus "/iterative" outside callback mode
  int runs = 0;
  int solved = 0;
  double geo_total_time = 0;
  double geo_callback_time = 0;
  double geo_callback_calls = 0;
  double mean_gap = 0;
};

inline std::string summary_key(const ResultRow& r) {
  std::string k = r.method;
  if (r.method != "vf") k += ":" + std::to_string(r.param);
  if (r.method == "dd" && r.layers > 0) k += ":" + std::to_string(r.layers);
  if (r.mode != "callback") k += "/" + r.mode;
  return k;
}

// Pure fold over raw rows, in first-seen order of the method keys.
inline std::vector<MethodSummary> summarize(const std::vector<ResultRow>& rows) {
  std::vector<std::string> order;
  std::map<std::string, std::vector<const ResultRow*>> by;
  for (const auto& r : rows) {
    const auto k = summary_key(r);
    if (!by.count(k)) order.push_back(k);
    by[k].push_back(&r);
  }
  std::vector<MethodSummary> out;
  for (const auto& k : order) {
    MethodSummary s;
    s.method = k;
    std::vector<double> tt, ct, calls;
    double gap = 0;
    for (const auto* r : by[k]) {
      ++s.runs;
      if (r->status == "optimal") ++s.solved;
      tt.push_back(r->total_time);
      ct.push_back(r->callback_time);
      calls.push_back(static_cast<double>(r->callback_calls));
      gap += r->gap;
    }
    s.geo_total_time = geometric_mean(tt);
    s.geo_callback_time = geometric_mean(ct);
    s.geo_callback_calls = geometric_mean(calls);
    s.mean_gap = gap / s.runs;
    out.push_back(std::move(s));
  }
  return out;
}

inline std::string format_summary(const std::vector<MethodSummary>& sums) {
  std::ostringstream os;
  os << std::left << std::setw(18) << "method" << std::right << std::setw(8) << "solved" << std::setw(8) << "runs"
     << std::setw(12) << "geo_time" << std::setw(12) << "geo_cb_time" << std::setw(12) << "geo_calls" << std::setw(10)
     << "mean_gap" << '\n';
  os << std::fixed << std::setprecision(3);
  for (const auto& s : sums)
    os << std::left << std::setw(18) << s.method << std::right << std::setw(8) << s.solved << std::setw(8) << s.runs
       << std::setw(12) << s.geo_total_time << std::setw(12) << s.geo_callback_time << std::setw(12)
       << s.geo_callback_calls << std::setw(10) << s.mean_gap << '\n';
  return os.str();
}

}  // namespace dpprice::io
