// dpprice command-line front end.
#include <glob.h>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>

#include "CLI11.hpp"

#include "dpprice/cli/instance_io.hpp"
#include "dpprice/cli/results.hpp"
#include "dpprice/dpprice.hpp"

namespace fs = std::filesystem;
using namespace dpprice;
using io::json;

namespace {

constexpr int kExitOptimal = 0;
constexpr int kExitError = 1;
constexpr int kExitLimit = 2;

struct MethodFlags {
  std::string method = "vf";
  int pairs = 0;
  int width = 0;
  int layers = 0;
  std::string mode = "callback";
  std::uint64_t seed = 0;
  double time_limit = -1;
  long node_limit = -1;
  double eps = 1e-6;

  void attach(CLI::App* app) {
    app->add_option("--method", method, "vf, sd or dd")->check(CLI::IsMember({"vf", "sd", "dd"}));
    app->add_option("--pairs", pairs, "sampled pairs N of the selection diagram");
    app->add_option("--width", width, "sampled paths W of the decision diagram");
    app->add_option("--layers", layers, "item groups m of the decision diagram (0: one item per layer)");
    app->add_option("--seed", seed, "random seed for sampling and grouping");
    attach_limits(app);
  }

  void attach_limits(CLI::App* app) {
    app->add_option("--mode", mode, "callback or iterative")->check(CLI::IsMember({"callback", "iterative"}));
    app->add_option("--time-limit", time_limit, "seconds per solve (env DPPRICE_TIME_LIMIT)");
    app->add_option("--node-limit", node_limit, "branch-and-bound nodes per solve (env DPPRICE_NODE_LIMIT)");
    app->add_option("--eps", eps, "follower value tolerance");
  }

  void apply_limits(MethodConfig& c) const {
    c.backend = io::backend_of_mode(mode);
    c.eps = eps;
    double tl = time_limit;
    long nl = node_limit;
    if (tl < 0)
      if (const char* e = std::getenv("DPPRICE_TIME_LIMIT")) tl = std::stod(e);
    if (nl < 0)
      if (const char* e = std::getenv("DPPRICE_NODE_LIMIT")) nl = std::stol(e);
    if (tl >= 0) c.time_limit = tl;
    if (nl >= 0) c.node_limit = nl;
  }

  MethodConfig config() const {
    MethodConfig c;
    c.method = parse_method(method);
    c.pairs = pairs;
    c.width = width;
    c.layers = layers;
    c.seed = seed;
    apply_limits(c);
    return c;
  }
};

int exit_code(SolveStatus s) {
  switch (s) {
    case SolveStatus::optimal: return kExitOptimal;
    case SolveStatus::limit: return kExitLimit;
    default: return kExitError;
  }
}

std::string instance_id(const std::string& path) { return fs::path(path).stem().string(); }

json solution_json(const PricingInstance& inst, const SolveResult& r) {
  return {{"problem", problem_name(inst.kind())},
          {"status", status_name(r.status)},
          {"objective", r.revenue},
          {"bound", r.bound},
          {"gap", r.gap},
          {"tolls", std::vector<double>(r.tolls.values().begin(), r.tolls.values().end())},
          {"response", to_indices(r.response)},
          {"stats",
           {{"total_time", r.stats.total_time},
            {"callback_time", r.stats.callback_time},
            {"callback_calls", r.stats.callback_calls},
            {"cuts", r.stats.cuts_added},
            {"nodes", r.stats.bb_nodes},
            {"cut_rounds", r.stats.cut_rounds}}}};
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << text;
}

// Files named directly, every *.json under a named directory, and glob patterns.
std::vector<std::string> expand_paths(const std::vector<std::string>& args) {
  std::vector<std::string> out;
  for (const auto& a : args) {
    if (fs::is_directory(a)) {
      std::vector<std::string> files;
      for (const auto& e : fs::directory_iterator(a))
        if (e.path().extension() == ".json") files.push_back(e.path().string());
      std::sort(files.begin(), files.end());
      out.insert(out.end(), files.begin(), files.end());
    } else if (a.find_first_of("*?[") != std::string::npos) {
      glob_t g{};
      if (glob(a.c_str(), 0, nullptr, &g) == 0)
        for (std::size_t i = 0; i < g.gl_pathc; ++i) out.emplace_back(g.gl_pathv[i]);
      globfree(&g);
    } else {
      out.push_back(a);
    }
  }
  return out;
}

int cmd_generate(const std::string& problem, int n, double ratio, double density, int elements, int count,
                 std::uint64_t seed, const std::string& out_dir) {
  const auto kind = parse_problem(problem);
  if (count < 0) throw ConfigError("count must be nonnegative");
  fs::create_directories(out_dir);
  for (int k = 0; k < count; ++k) {
    const std::uint64_t s = seed + static_cast<std::uint64_t>(k);
    io::InstanceFile f;
    io::Provenance p;
    p.seed = s;
    switch (kind) {
      case ProblemKind::kpp:
        f.instance = generate_kpp(n, ratio, s);
        p.generator = "kpp";
        p.params = {{"n", n}, {"ratio", ratio}};
        break;
      case ProblemKind::maxsspp:
        f.instance = generate_maxsspp(n, density, s);
        p.generator = "maxsspp";
        p.params = {{"n", n}, {"density", density}};
        break;
      case ProblemKind::minscpp:
        if (elements > 0) {
          f.instance = generate_minscpp_elements(n, elements, s);
          p.params = {{"n", n}, {"elements", elements}};
        } else {
          f.instance = generate_minscpp(n, ratio, s);
          p.params = {{"n", n}, {"ratio", ratio}};
        }
        p.generator = "minscpp";
        break;
      case ProblemKind::kip:
        f.instance = generate_kip(n, s);
        p.generator = "kip";
        p.params = {{"n", n}};
        break;
    }
    f.provenance = p;
    const auto path = fs::path(out_dir) / (problem + "_n" + std::to_string(n) + "_s" + std::to_string(s) + ".json");
    io::save_instance(path.string(), f);
    std::cout << path.string() << '\n';
  }
  return kExitOptimal;
}

int cmd_solve(const std::string& file, const MethodFlags& flags, const std::string& sol_out, const std::string& lp_out,
              bool header) {
  const auto f = io::load_instance(file);
  const auto cfg = flags.config();
  const auto run = run_method(f.instance, cfg);
  if (header) std::cout << io::csv_header() << '\n';
  std::cout << io::csv_row(io::make_row(instance_id(file), cfg, run.result)) << '\n';
  if (!sol_out.empty()) write_text(sol_out, solution_json(f.instance, run.result).dump(2) + "\n");
  if (!lp_out.empty()) {
    const auto mp = f.instance.kind() == ProblemKind::kip
                        ? build_kip_master(f.instance, run.final_diagram)
                        : build_master(f.instance, run.final_diagram, cfg.mccormick_override);
    write_text(lp_out, milp::write_lp(mp.model));
  }
  return exit_code(run.result.status);
}

int cmd_oracle(const std::string& file, bool header) {
  const auto f = io::load_instance(file);
  const auto& inst = f.instance;
  const auto r = inst.kind() == ProblemKind::kip ? brute_force_kip(inst) : brute_force_cpp(inst, mccormick_bounds(inst));
  io::ResultRow row;
  row.instance = instance_id(file);
  row.method = "oracle";
  row.mode = "enumeration";
  row.status = status_name(r.status);
  row.objective = r.revenue;
  row.bound = r.revenue;
  if (header) std::cout << io::csv_header() << '\n';
  std::cout << io::csv_row(row) << '\n';
  std::cout << "# response " << format_set(r.response) << '\n';
  return kExitOptimal;
}

int cmd_bench(const std::vector<std::string>& inputs, const std::string& methods, const std::string& modes,
              const MethodFlags& flags, unsigned jobs, const std::string& out, const std::string& summary_out) {
  const auto files = expand_paths(inputs);
  if (files.empty()) throw ConfigError("no instance files");
  std::vector<MethodConfig> cfgs;
  std::vector<std::string> labels, mode_list;
  auto split = [](const std::string& s) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    for (std::string x; std::getline(ss, x, ',');)
      if (!x.empty()) parts.push_back(x);
    return parts;
  };
  labels = split(methods);
  mode_list = split(modes);
  for (const auto& m : mode_list)
    for (const auto& l : labels) {
      auto c = parse_method_label(l);
      c.seed = flags.seed;
      MethodFlags mf = flags;
      mf.mode = m;
      mf.apply_limits(c);
      cfgs.push_back(std::move(c));
    }
  if (cfgs.empty()) throw ConfigError("no methods");

  std::vector<io::InstanceFile> insts;
  for (const auto& p : files) insts.push_back(io::load_instance(p));
  const std::size_t total = insts.size() * cfgs.size();
  std::vector<io::ResultRow> rows(total);
  std::atomic<std::size_t> next{0};
  std::mutex err_mu;
  auto worker = [&] {
    for (std::size_t k; (k = next++) < total;) {
      const auto& f = insts[k / cfgs.size()];
      const auto& cfg = cfgs[k % cfgs.size()];
      const auto id = instance_id(files[k / cfgs.size()]);
      try {
        rows[k] = io::make_row(id, cfg, solve(f.instance, cfg));
      } catch (const std::exception& e) {
        SolveResult bad;
        bad.status = SolveStatus::error;
        rows[k] = io::make_row(id, cfg, bad);
        std::lock_guard<std::mutex> lock(err_mu);
        std::cerr << id << " " << cfg.label() << ": " << e.what() << '\n';
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned j = 0; j < std::max(1u, jobs); ++j) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  std::ostringstream csv;
  csv << io::csv_header() << '\n';
  for (const auto& r : rows) csv << io::csv_row(r) << '\n';
  write_text(out, csv.str());
  const auto summary = io::format_summary(io::summarize(rows));
  if (summary_out.empty())
    std::cerr << summary;
  else
    write_text(summary_out, summary);
  int code = kExitOptimal;
  for (const auto& r : rows) {
    if (r.status == "error" || r.status == "infeasible") return kExitError;
    if (r.status == "limit") code = kExitLimit;
  }
  return code;
}

int cmd_diagram(const std::string& file, const MethodFlags& flags, bool final, const std::string& out) {
  const auto f = io::load_instance(file);
  const auto cfg = flags.config();
  std::string text;
  if (final) {
    const auto run = run_method(f.instance, cfg);
    text = export_dot(run.initial) + export_dot(run.final_diagram);
  } else {
    cfg.validate(f.instance.n);
    const auto problem = make_follower(f.instance);
    Rng rng(cfg.seed);
    text = export_dot(driver_detail::initial_diagram(f.instance, *problem, cfg, rng));
  }
  write_text(out, text);
  return kExitOptimal;
}

int cmd_difficulty(const std::string& file, double revenue, const MethodFlags& flags) {
  const auto f = io::load_instance(file);
  const auto& inst = f.instance;
  if (inst.kind() == ProblemKind::kip) throw ConfigError("difficulty is defined for pricing instances only");
  double g = revenue;
  if (!(g >= 0)) {
    try {
      g = brute_force_cpp(inst, mccormick_bounds(inst)).revenue;
    } catch (const OracleTooLarge&) {
      const auto r = solve_cpp(inst, flags.config());
      if (r.status != SolveStatus::optimal) throw Error("revenue not proven optimal; pass --revenue");
      g = r.revenue;
    }
  }
  const auto rep = estimate_difficulty(inst, g);
  std::cout << "f_zero " << rep.f_zero << "\nf_infinity " << rep.f_infinity << "\ng " << rep.g << "\nscore "
            << rep.score << '\n';
  return kExitOptimal;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact solvers for combinatorial pricing and knapsack interdiction"};
  app.require_subcommand(1);

  std::string problem = "kpp", out_dir = ".";
  int n = 10, elements = 0, count = 1;
  double ratio = 0.5, density = 0.3;
  std::uint64_t gen_seed = 0;
  auto* gen = app.add_subcommand("generate", "write random instance files");
  gen->add_option("--problem", problem, "kpp, maxsspp, minscpp or kip")
      ->check(CLI::IsMember({"kpp", "maxsspp", "minscpp", "kip"}));
  gen->add_option("--n", n, "items (sets for minscpp)");
  gen->add_option("--ratio", ratio, "kpp: tolled share; minscpp: sets per element");
  gen->add_option("--density", density, "maxsspp edge density");
  gen->add_option("--elements", elements, "minscpp element count (overrides --ratio)");
  gen->add_option("--count", count, "number of files; file k uses seed + k");
  gen->add_option("--seed", gen_seed, "first seed");
  gen->add_option("--out", out_dir, "output directory");

  std::string file, sol_out, lp_out;
  bool no_header = false;
  MethodFlags solve_flags;
  auto* sol = app.add_subcommand("solve", "solve one instance file");
  sol->add_option("file", file)->required();
  solve_flags.attach(sol);
  sol->add_option("--out", sol_out, "write the solution as JSON");
  sol->add_option("--lp", lp_out, "write the final master model in LP format");
  sol->add_flag("--no-header", no_header, "omit the CSV header");

  auto* ora = app.add_subcommand("oracle", "solve one instance by enumeration");
  ora->add_option("file", file)->required();
  ora->add_flag("--no-header", no_header, "omit the CSV header");

  std::vector<std::string> inputs;
  std::string methods = "vf,sd:2,dd:2", modes, bench_out, summary_out;
  unsigned jobs = 1;
  MethodFlags bench_flags;
  auto* bench = app.add_subcommand("bench", "run a method matrix over instance files");
  bench->add_option("inputs", inputs, "files, directories or glob patterns")->required();
  bench->add_option("--methods", methods, "comma-separated labels: vf, sd:N, dd:W, dd:W:m");
  bench->add_option("--modes", modes, "comma-separated modes (default: --mode)");
  bench->add_option("--seed", bench_flags.seed, "random seed for every run");
  bench_flags.attach_limits(bench);
  bench->add_option("--jobs", jobs, "worker threads");
  bench->add_option("--out", bench_out, "CSV output (default stdout)");
  bench->add_option("--summary", summary_out, "summary output (default stderr)");

  bool final = false;
  std::string dot_out;
  MethodFlags diag_flags;
  auto* diag = app.add_subcommand("diagram", "export the initial (and final) diagram as DOT");
  diag->add_option("file", file)->required();
  diag_flags.attach(diag);
  diag->add_flag("--final", final, "also solve and export the final diagram");
  diag->add_option("--out", dot_out, "DOT output (default stdout)");

  double revenue = -1;
  MethodFlags diff_flags;
  auto* diff = app.add_subcommand("difficulty", "print the difficulty score");
  diff->add_option("file", file)->required();
  diff->add_option("--revenue", revenue, "known optimal revenue");
  diff_flags.attach(diff);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitError;
  }

  try {
    if (*gen) return cmd_generate(problem, n, ratio, density, elements, count, gen_seed, out_dir);
    if (*sol) return cmd_solve(file, solve_flags, sol_out, lp_out, !no_header);
    if (*ora) return cmd_oracle(file, !no_header);
    if (*bench) return cmd_bench(inputs, methods, modes.empty() ? bench_flags.mode : modes, bench_flags, jobs,
                                 bench_out, summary_out);
    if (*diag) return cmd_diagram(file, diag_flags, final, dot_out);
    if (*diff) return cmd_difficulty(file, revenue, diff_flags);
  } catch (const OracleTooLarge& e) {
    std::cerr << "error: too large: " << e.what() << '\n';
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
