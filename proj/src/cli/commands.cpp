#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "bmcopula/cli.hpp"
#include "bmcopula/csv.hpp"
#include "bmcopula/errors.hpp"

namespace bmcopula::cli {
namespace {

namespace fs = std::filesystem;

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError(path);
  f << text;
  f.close();
  if (!f) throw IoError(path);
}

void emit(const RunConfig& cfg, std::ostream& out, const std::string& text) {
  if (cfg.out.empty())
    out << text;
  else
    write_file(cfg.out, text);
}

std::string grid_csv(const GridValues& gv) {
  std::ostringstream s;
  write_grid_csv(s, gv);
  return s.str();
}

int cmd_grid(const RunConfig& cfg, std::ostream& out, bool density) {
  const GridValues gv = evaluate_grid(cfg.grid, cfg.kind, density);
  emit(cfg, out, grid_csv(gv));
  if (!cfg.svg.empty())
    write_file(cfg.svg, render_heatmap(gv, describe(cfg.kind) + (density ? " density" : " copula"), density));
  return 0;
}

int cmd_sample(const RunConfig& cfg, std::ostream& out) {
  const std::size_t n = cfg.n.value_or(1000);
  const SampleBatch batch = sample(n, cfg.kind, cfg.seed);
  std::ostringstream s;
  s << "# " << describe(cfg.kind) << " seed=" << cfg.seed << " n=" << n << "\r\n";
  CsvWriter w(s);
  w.row({"u", "v"});
  for (const auto& p : batch.points) {
    w.field(p.u).field(p.v);
    w.end_row();
  }
  emit(cfg, out, s.str());
  return 0;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  VerifyOptions opt;
  opt.quick = cfg.quick;
  opt.n_paths = cfg.n.value_or(cfg.quick ? 100'000 : 1'000'000);
  opt.seed = cfg.seed;
  opt.tolerance_scale = cfg.tolerance_scale;
  const VerifyReport rep = run_verify(opt);

  CsvWriter w(out);
  w.row({"suite", "check", "value", "tolerance", "status"});
  for (const auto& c : rep.checks) {
    w.field(c.suite).field(c.name).field(c.value).field(c.tolerance);
    w.field(c.counted ? (c.pass ? "PASS" : "FAIL") : (c.pass ? "info-pass" : "info-fail"));
    w.end_row();
  }
  if (!cfg.out.empty()) {
    std::ostringstream s;
    write_report_csv(s, rep.mc_rows);
    write_file(cfg.out, s.str());
  }
  return rep.pass() ? 0 : 1;
}

int cmd_figures(const RunConfig& cfg, std::ostream& out) {
  const fs::path dir = cfg.out.empty() ? fs::path("figures") : fs::path(cfg.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError(dir.string());

  struct Panel {
    std::string name;
    CopulaKind kind;
    bool density;
  };
  const std::vector<Panel> panels = {
      {"figure1", BmMax{1.0}, true},
      {"figure2_mu-2", BmMaxDrift{-2.0, 1.0}, true},
      {"figure2_mu0", BmMaxDrift{0.0, 1.0}, true},
      {"figure2_mu10", BmMaxDrift{10.0, 1.0}, true},
      {"figure3_rho-0.99", CorrTerminalVsMax{0.0, -0.99, 0.25, 0.75, 1.0}, false},
      {"figure3_rho0", CorrTerminalVsMax{0.0, 0.0, 0.25, 0.75, 1.0}, false},
      {"figure3_rho0.99", CorrTerminalVsMax{0.0, 0.99, 0.25, 0.75, 1.0}, false},
  };
  for (const auto& p : panels) {
    const GridValues gv = evaluate_grid(cfg.grid, p.kind, p.density);
    const std::string base = (dir / p.name).string();
    write_file(base + ".csv", grid_csv(gv));
    write_file(base + ".svg", render_heatmap(gv, describe(p.kind) + (p.density ? " density" : " copula"), p.density));
    out << base << ".svg\n";
  }
  return 0;
}

}  // namespace

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    switch (cfg.command) {
      case Command::Eval:
        return cmd_grid(cfg, out, false);
      case Command::Density:
        return cmd_grid(cfg, out, true);
      case Command::Sample:
        return cmd_sample(cfg, out);
      case Command::Verify:
        return cmd_verify(cfg, out);
      case Command::Figures:
        return cmd_figures(cfg, out);
    }
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

int main(int argc, const char* const* argv) {
  try {
    const auto cfg = parse_command_line(argc, argv, std::cout);
    if (!cfg) return 0;
    return run(*cfg, std::cout, std::cerr);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\nrun with --help for usage\n";
    return 2;
  }
}

}  // namespace bmcopula::cli
