#pragma once

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "bmcopula/bm_joint.hpp"

namespace bmcopula {

enum class JointTarget { WtMt, WTMt, WTMst, B1TM2st };
std::string target_name(JointTarget target);

struct PathConfig {
  std::size_t n_paths = 1'000'000;
  double dt = 1e-2;
  double horizon = 1.0;
  std::uint64_t seed = 20240601;
  bool antithetic = true;
};

/// Throws ConfigError unless n_paths >= 1000, 0 < dt <= horizon / 100 and
/// (with antithetic pairs) n_paths is even.
void validate(const PathConfig& cfg);

struct JointQuery {
  double x = 0.0;
  double y = 0.0;
};

struct EmpiricalJoint {
  std::vector<JointQuery> queries;
  std::vector<double> estimates;
  std::vector<double> std_errors;
  // P(X <= x) alone, for the variance-reduction check.
  std::vector<double> x_marginal;
  std::vector<double> x_marginal_se;
};

/// Monte Carlo estimate of P(X <= x, M <= y) for the single-motion targets:
/// WtMt (X = W_t, M over [0, t]), WTMt (X = W_T, M over [0, t]) and WTMst
/// (X = W_T, M over [s, t]).  Gaussian increments are exact on a grid of step
/// <= dt containing s and t, and each step's maximum is drawn from the
/// Brownian-bridge law given its endpoints.  cfg.horizon must equal the final
/// time (t for WtMt, T otherwise).
EmpiricalJoint simulate_joint(JointTarget target, const BmParams& p, const PathConfig& cfg,
                              std::span<const JointQuery> queries);

/// B1TM2st: X = B1_T, M = maximum of B2 over [s, t].
EmpiricalJoint simulate_joint(const CorrBmParams& p, double s, double t, double T, const PathConfig& cfg,
                              std::span<const JointQuery> queries);

struct ReportRow {
  std::string target;
  double x = 0.0;
  double y = 0.0;
  double closed_form = 0.0;
  double estimate = 0.0;
  double std_error = 0.0;
  double z_score = 0.0;
};

std::vector<ReportRow> make_report(const std::string& target, const EmpiricalJoint& mc,
                                   std::span<const double> closed_form);
/// Columns target,x,y,closed_form,estimate,std_error,z_score.
void write_report_csv(std::ostream& out, std::span<const ReportRow> rows);

}  // namespace bmcopula
