#include "linking/cli.hpp"

#include "linking/errors.hpp"
#include "linking/link_spec.hpp"
#include "linking/phi_functions.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace linking {

namespace {

std::string fmt17(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SpecError("cannot read spec file \"" + path + "\"");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

GridSpec parse_grid_flag(const std::string& text) {
  GridSpec g;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw SpecError("--grid: expected key=value, got \"" + item + "\"");
    const std::string key = item.substr(0, eq);
    int value = 0;
    try {
      std::size_t used = 0;
      value = std::stoi(item.substr(eq + 1), &used);
      if (used != item.size() - eq - 1) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw SpecError("--grid: bad node count in \"" + item + "\"");
    }
    if (value < 0) throw SpecError("--grid: node counts must be >= 0");
    if (key == "k") g.k_nodes = value;
    else if (key == "l") g.l_nodes = value;
    else if (key == "u") g.u_nodes = value;
    else throw SpecError("--grid: unknown key \"" + key + "\" (expected k, l or u)");
  }
  return g;
}

// Flags shared by the spec-driven subcommands.
struct SpecFlags {
  std::string path;
  std::optional<double> tol;
  std::optional<std::string> grid;
  std::optional<int> max_level;
  std::optional<double> min_alpha;
  std::uint64_t seed = 1;
  bool timing = false;

  void attach(CLI::App& app, bool with_timing) {
    app.add_option("spec", path, "link spec JSON file")->required();
    app.add_option("--tol", tol, "tolerance on the linking number");
    app.add_option("--grid", grid, "base nodes per axis, e.g. k=64,l=64,u=32");
    app.add_option("--max-level", max_level, "maximum refinement level");
    app.add_option("--min-alpha", min_alpha, "disjointness threshold in radians");
    app.add_option("--seed", seed, "seed for random catalog entries without their own");
    if (with_timing) app.add_flag("--timing", timing, "add wall time to the report");
  }

  LinkSpec load() const {
    LinkSpec spec = parse_link_spec(read_file(path), SpecContext{seed});
    EvaluationOptions& o = spec.options;
    if (tol) {
      if (!(*tol > 0)) throw SpecError("--tol must be positive");
      o.tol = *tol;
    }
    if (grid) o.grid = parse_grid_flag(*grid);
    if (max_level) {
      if (*max_level < 0) throw SpecError("--max-level must be >= 0");
      o.max_level = *max_level;
    }
    if (min_alpha) o.thresholds.min_alpha = *min_alpha;
    return spec;
  }
};

int exit_code(const LinkingReport& r) {
  return r.accepted && r.converged ? kExitAccepted : kExitRejected;
}

int cmd_link(const SpecFlags& flags, std::optional<SpecMethod> force, std::ostream& out) {
  LinkSpec spec = flags.load();
  if (force) spec.method = *force;
  const BuiltLink link = build_link(spec);
  const auto t0 = std::chrono::steady_clock::now();
  const LinkingReport report = run_link_spec(spec, link);
  const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
  std::optional<double> wall;
  if (flags.timing) wall = dt.count();
  out << run_report(spec, report, wall).dump(2) << "\n";
  return exit_code(report);
}

int cmd_convergence(const SpecFlags& flags, int levels, std::ostream& out) {
  if (levels < 1) throw SpecError("--levels must be >= 1");
  const LinkSpec spec = flags.load();
  const BuiltLink link = build_link(spec);
  const GridSpec& g = spec.options.grid;
  const bool oracle = spec.method == SpecMethod::oracle;
  const int k0 = g.k_nodes > 0 ? g.k_nodes : oracle ? 64 : default_nodes_per_axis(link.K->dim());
  const int l0 = g.l_nodes > 0 ? g.l_nodes : oracle ? 64 : default_nodes_per_axis(link.L->dim());
  const int u0 = g.u_nodes > 0 ? g.u_nodes : kDefaultUNodes;
  out << "level,nodes,value,error_estimate,converged\n";
  bool last = true;
  for (int level = 0; level < levels; ++level) {
    LinkSpec at = spec;
    const int scale = 1 << level;
    at.options.grid = GridSpec{k0 * scale, l0 * scale, u0 * scale};
    at.options.tol = std::numeric_limits<double>::infinity();
    at.options.max_level = 0;
    const LinkingReport r = run_link_spec(at, link);
    const bool converged = r.error_estimate <= spec.options.tol;
    last = converged;
    out << level << "," << r.nodes_per_level.front() << "," << fmt17(r.raw_value) << ","
        << fmt17(r.error_estimate) << "," << (converged ? "true" : "false") << "\n";
  }
  return last ? kExitAccepted : kExitRejected;
}

int cmd_phi(int k, int l, const std::vector<double>& alphas, int points, double lo, double hi,
            std::ostream& out) {
  if (k < 0 || l < 0) throw SpecError("phi: k and l must be >= 0");
  std::vector<double> grid = alphas;
  if (grid.empty()) {
    if (points < 1) throw SpecError("phi: --points must be >= 1");
    if (!(lo >= 0 && hi <= std::numbers::pi && lo <= hi)) {
      throw SpecError("phi: need 0 <= --alpha-min <= --alpha-max <= pi");
    }
    for (int i = 0; i < points; ++i) {
      grid.push_back(points == 1 ? lo : lo + (hi - lo) * i / (points - 1));
    }
  }
  for (double a : grid) {
    if (!(a >= 0 && a <= std::numbers::pi)) throw SpecError("phi: alpha must lie in [0, pi]");
  }
  out << "alpha,phi,kernel_ratio,convolution\n";
  for (double a : grid) {
    const double ratio =
        a < kMinKernelAlpha ? std::numeric_limits<double>::infinity() : phi_kernel_ratio(k, l, a);
    out << fmt17(a) << "," << fmt17(phi(k, l, a)) << "," << fmt17(ratio) << ","
        << fmt17(convolution(k, l, a)) << "\n";
  }
  return kExitAccepted;
}

int cmd_catalog(bool json, std::ostream& out) {
  const Json schemas = catalog_schemas();
  if (json) {
    out << schemas.dump(2) << "\n";
    return kExitAccepted;
  }
  for (const auto& kind : schemas) {
    out << kind["kind"].get<std::string>() << " (dim " << kind["dim"].get<std::string>() << ")\n";
    for (const auto& p : kind["params"]) {
      out << "  " << p["name"].get<std::string>() << " : " << p["type"].get<std::string>()
          << "  " << p["note"].get<std::string>() << "\n";
    }
  }
  return kExitAccepted;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Linking numbers of submanifolds of S^n by integral formulas", "linking"};
  app.require_subcommand(1);

  SpecFlags link_flags;
  auto* link = app.add_subcommand("link", "evaluate a link spec and print a JSON report");
  link_flags.attach(*link, true);

  SpecFlags oracle_flags;
  auto* oracle = app.add_subcommand("oracle", "Gauss-integral oracle on a pair of curves in S^3");
  oracle_flags.attach(*oracle, true);

  SpecFlags conv_flags;
  int levels = 4;
  auto* conv = app.add_subcommand("convergence", "CSV of estimates over doubling grids");
  conv_flags.attach(*conv, false);
  conv->add_option("--levels", levels, "number of grid levels");

  int pk = 1;
  int pl = 1;
  std::vector<double> alphas;
  int points = 257;
  double lo = 0.0;
  double hi = std::numbers::pi;
  auto* phi_cmd = app.add_subcommand("phi", "CSV of the kernels on an alpha grid");
  phi_cmd->add_option("-k,--k", pk, "dimension of K")->required();
  phi_cmd->add_option("-l,--l", pl, "dimension of L")->required();
  phi_cmd->add_option("--alpha", alphas, "explicit alpha values (repeatable)");
  phi_cmd->add_option("--points", points, "uniform grid size");
  phi_cmd->add_option("--alpha-min", lo, "grid start");
  phi_cmd->add_option("--alpha-max", hi, "grid end");

  bool catalog_json = false;
  auto* catalog = app.add_subcommand("catalog", "list catalog kinds and their parameters");
  catalog->add_flag("--json", catalog_json, "machine-readable listing");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitAccepted : kExitInvalid;
  }

  try {
    if (*link) return cmd_link(link_flags, std::nullopt, out);
    if (*oracle) return cmd_link(oracle_flags, SpecMethod::oracle, out);
    if (*conv) return cmd_convergence(conv_flags, levels, out);
    if (*phi_cmd) return cmd_phi(pk, pl, alphas, points, lo, hi, out);
    if (*catalog) return cmd_catalog(catalog_json, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
  return kExitInvalid;
}

}  // namespace linking
