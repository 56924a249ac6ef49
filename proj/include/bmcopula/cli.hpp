#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "bmcopula/copula.hpp"
#include "bmcopula/mc_oracle.hpp"

namespace bmcopula::cli {

/// Bad flags, config keys or parameter values (exit code 2).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Output file could not be written (exit code 2).
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& path) : std::runtime_error("cannot write " + path), path_(path) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

enum class Command { Eval, Density, Sample, Verify, Figures };
std::string command_name(Command c);

struct GridSpec {
  double u_min = 1e-3;
  double u_max = 1.0 - 1e-3;
  double v_min = 1e-3;
  double v_max = 1.0 - 1e-3;
  std::size_t nu = 101;
  std::size_t nv = 101;

  double u(std::size_t i) const;
  double v(std::size_t j) const;
};

/// Throws UsageError unless 0 < min < max < 1 on both axes and nu, nv >= 2.
void validate(const GridSpec& g);
/// "UxV", e.g. "101x101".
void parse_grid_size(std::string_view text, GridSpec& g);
/// "a:b,c:d", u range then v range.
void parse_grid_range(std::string_view text, GridSpec& g);

struct RunConfig {
  Command command = Command::Eval;
  CopulaKind kind = BmMax{};
  GridSpec grid;
  std::string out;  // file, or directory for figures; empty writes to stdout
  std::string svg;
  std::uint64_t seed = 20240601;
  std::optional<std::size_t> n;
  bool quick = false;
  double tolerance_scale = 1.0;
};

/// Flags override the --config file, which overrides defaults.  Returns
/// nullopt after printing help.  Throws UsageError.
std::optional<RunConfig> parse_command_line(int argc, const char* const* argv, std::ostream& out);

/// Values on the grid, row-major with v as the outer index.
struct GridValues {
  GridSpec grid;
  std::vector<double> values;
  double at(std::size_t i, std::size_t j) const { return values[j * grid.nu + i]; }
};

GridValues evaluate_grid(const GridSpec& g, const CopulaKind& kind, bool density);
/// Columns u,v,value.
void write_grid_csv(std::ostream& out, const GridValues& gv);

/// Standalone heatmap with axes and a colour bar.  With clip set the colour
/// scale tops out at the 99.5th percentile of the finite values.
std::string render_heatmap(const GridValues& gv, std::string_view title, bool clip);

/// One line of the verification summary.
struct CheckResult {
  std::string suite;
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  bool counted = true;  // informational rows do not affect the exit code
};

struct VerifyOptions {
  std::size_t n_paths = 1'000'000;
  std::uint64_t seed = 20240601;
  double tolerance_scale = 1.0;
  bool quick = false;
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  std::vector<ReportRow> mc_rows;
  bool pass() const;
};

VerifyReport run_verify(const VerifyOptions& opt);

/// MC query points and closed forms used by the agreement suite.
struct McSuite {
  JointTarget target;
  std::vector<JointQuery> queries;
  std::vector<double> closed_form;
};
std::vector<McSuite> mc_suites();
/// Runs one suite through the oracle.
EmpiricalJoint run_mc_suite(const McSuite& suite, const PathConfig& cfg);

/// Runs one command; returns the process exit code.  Errors go to err.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int main(int argc, const char* const* argv);

}  // namespace bmcopula::cli
