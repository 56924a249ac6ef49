#include <CLI11.hpp>
#include <map>
#include <ostream>

#include "bmcopula/cli.hpp"
#include "bmcopula/errors.hpp"

namespace bmcopula::cli {
namespace {

const std::map<std::string, Command> kCommands = {{"eval", Command::Eval},
                                                  {"density", Command::Density},
                                                  {"sample", Command::Sample},
                                                  {"verify", Command::Verify},
                                                  {"figures", Command::Figures}};

struct KindArgs {
  std::string name = "bm-max";
  std::optional<double> mu, rho, s, t, T;
};

void reject(const std::optional<double>& v, const char* flag, const std::string& kind) {
  if (v) throw UsageError(std::string("--") + flag + " does not apply to kind " + kind);
}

CopulaKind build_kind(const KindArgs& a) {
  CopulaKind kind;
  if (a.name == "bm-max") {
    reject(a.mu, "mu", a.name);
    reject(a.rho, "rho", a.name);
    reject(a.s, "s", a.name);
    reject(a.T, "T", a.name);
    BmMax k;
    k.t = a.t.value_or(k.t);
    kind = k;
  } else if (a.name == "bm-max-drift") {
    reject(a.rho, "rho", a.name);
    reject(a.s, "s", a.name);
    reject(a.T, "T", a.name);
    BmMaxDrift k;
    k.mu = a.mu.value_or(k.mu);
    k.t = a.t.value_or(k.t);
    kind = k;
  } else if (a.name == "terminal-vs-max") {
    reject(a.rho, "rho", a.name);
    reject(a.s, "s", a.name);
    TerminalVsMax k;
    k.mu = a.mu.value_or(k.mu);
    k.t = a.t.value_or(k.t);
    k.T = a.T.value_or(std::max(k.T, k.t));
    kind = k;
  } else if (a.name == "terminal-vs-window-max") {
    reject(a.rho, "rho", a.name);
    TerminalVsWindowMax k;
    k.mu = a.mu.value_or(k.mu);
    k.s = a.s.value_or(k.s);
    k.t = a.t.value_or(k.t);
    k.T = a.T.value_or(k.T);
    kind = k;
  } else if (a.name == "corr-terminal-vs-max") {
    CorrTerminalVsMax k;
    k.mu = a.mu.value_or(k.mu);
    k.rho = a.rho.value_or(k.rho);
    k.s = a.s.value_or(k.s);
    k.t = a.t.value_or(k.t);
    k.T = a.T.value_or(k.T);
    kind = k;
  } else {
    throw UsageError("unknown kind '" + a.name + "'");
  }
  try {
    validate(kind);
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
  return kind;
}

double parse_real(std::string_view text, std::string_view what) {
  const std::string s(text);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw UsageError("bad number '" + s + "' in " + std::string(what));
  return v;
}

std::size_t parse_count(std::string_view text, std::string_view what) {
  const double v = parse_real(text, what);
  if (!(v >= 2.0) || v != std::floor(v) || v > 1e5)
    throw UsageError("grid size must be an integer >= 2 in " + std::string(what));
  return static_cast<std::size_t>(v);
}

}  // namespace

std::string command_name(Command c) {
  for (const auto& [name, cmd] : kCommands)
    if (cmd == c) return name;
  return "?";
}

double GridSpec::u(std::size_t i) const {
  if (i + 1 == nu) return u_max;
  return u_min + (u_max - u_min) * static_cast<double>(i) / static_cast<double>(nu - 1);
}

double GridSpec::v(std::size_t j) const {
  if (j + 1 == nv) return v_max;
  return v_min + (v_max - v_min) * static_cast<double>(j) / static_cast<double>(nv - 1);
}

void validate(const GridSpec& g) {
  auto in_unit = [](double x) { return x > 0.0 && x < 1.0; };
  if (!in_unit(g.u_min) || !in_unit(g.u_max) || !in_unit(g.v_min) || !in_unit(g.v_max))
    throw UsageError("grid range must lie strictly inside (0, 1)");
  if (!(g.u_min < g.u_max) || !(g.v_min < g.v_max)) throw UsageError("grid range needs min < max");
  if (g.nu < 2 || g.nv < 2) throw UsageError("grid needs at least 2 points per axis");
}

void parse_grid_size(std::string_view text, GridSpec& g) {
  const auto x = text.find_first_of("xX");
  if (x == std::string_view::npos) throw UsageError("--grid expects UxV, got '" + std::string(text) + "'");
  g.nu = parse_count(text.substr(0, x), "--grid");
  g.nv = parse_count(text.substr(x + 1), "--grid");
}

void parse_grid_range(std::string_view text, GridSpec& g) {
  const auto comma = text.find(',');
  if (comma == std::string_view::npos) throw UsageError("--range expects a:b,c:d");
  auto pair = [](std::string_view part, double& lo, double& hi) {
    const auto colon = part.find(':');
    if (colon == std::string_view::npos) throw UsageError("--range expects a:b,c:d");
    lo = parse_real(part.substr(0, colon), "--range");
    hi = parse_real(part.substr(colon + 1), "--range");
  };
  pair(text.substr(0, comma), g.u_min, g.u_max);
  pair(text.substr(comma + 1), g.v_min, g.v_max);
}

std::optional<RunConfig> parse_command_line(int argc, const char* const* argv, std::ostream& out) {
  CLI::App app{"Copulas of Brownian motion and its maximum"};
  app.option_defaults()->always_capture_default(false);

  std::string command;
  KindArgs kind;
  std::string grid_size, grid_range;
  RunConfig cfg;
  std::size_t n = 0;

  app.add_option("command", command, "eval | density | sample | verify | figures")
      ->required()
      ->check(CLI::IsMember({"eval", "density", "sample", "verify", "figures"}));
  app.add_option("--kind", kind.name,
                 "bm-max | bm-max-drift | terminal-vs-max | terminal-vs-window-max | corr-terminal-vs-max");
  app.add_option("--mu", kind.mu, "drift of the maximum process");
  app.add_option("--rho", kind.rho, "correlation (corr-terminal-vs-max)");
  app.add_option("--s", kind.s, "window start");
  app.add_option("--t", kind.t, "window end");
  app.add_option("--T", kind.T, "terminal time");
  app.add_option("--grid", grid_size, "grid size UxV (default 101x101)");
  app.add_option("--range", grid_range, "u and v ranges a:b,c:d (default 0.001:0.999,0.001:0.999)");
  auto* n_opt = app.add_option("--n", n, "sample size or path count");
  app.add_option("--seed", cfg.seed, "random seed");
  app.add_option("--out", cfg.out, "output file (directory for figures)");
  app.add_option("--svg", cfg.svg, "heatmap output file");
  app.add_flag("--quick", cfg.quick, "verify with 1e5 paths and relaxed z bound");
  app.add_option("--tolerance-scale", cfg.tolerance_scale, "multiply every verify tolerance");
  app.set_config("--config", "", "key=value file; flags take precedence");
  app.allow_config_extras(CLI::config_extras_mode::error);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  cfg.command = kCommands.at(command);
  cfg.kind = build_kind(kind);
  if (!grid_size.empty()) parse_grid_size(grid_size, cfg.grid);
  if (!grid_range.empty()) parse_grid_range(grid_range, cfg.grid);
  validate(cfg.grid);
  if (n_opt->count() > 0) {
    if (n < 1) throw UsageError("--n must be at least 1");
    cfg.n = n;
  }
  if (!(cfg.tolerance_scale >= 0.0) || !std::isfinite(cfg.tolerance_scale))
    throw UsageError("--tolerance-scale must be finite and non-negative");
  return cfg;
}

}  // namespace bmcopula::cli
