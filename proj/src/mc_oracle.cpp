#include "bmcopula/mc_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bmcopula/csv.hpp"
#include "bmcopula/errors.hpp"
#include "bmcopula/parallel.hpp"
#include "bmcopula/rng.hpp"

namespace bmcopula {
namespace {

constexpr std::size_t kBlock = 4096;

struct Model {
  // Max process Y = mu_y u + sig_y W2; terminal process X (Y itself when shared).
  double mu_y = 0.0, sig_y = 1.0;
  double mu_x = 0.0, sig_x = 1.0, rho = 1.0;
  bool shared = true;
  double s = 0.0, t = 1.0, T = 1.0;
};

struct Grid {
  std::vector<double> times;
  std::size_t window_begin = 0;  // index of s
  std::size_t window_end = 0;    // index of t
};

Grid make_grid(const Model& m, double dt) {
  const auto n = static_cast<std::size_t>(std::ceil(m.T / dt - 1e-9));
  std::vector<double> pts;
  pts.reserve(n + 3);
  for (std::size_t k = 0; k <= n; ++k) pts.push_back(m.T * static_cast<double>(k) / static_cast<double>(n));
  const double merge = 1e-12 * m.T;
  auto insert = [&pts, merge](double v) {
    for (auto& p : pts)
      if (std::abs(p - v) <= merge) {
        p = v;
        return;
      }
    pts.push_back(v);
  };
  insert(m.s);
  insert(m.t);
  std::sort(pts.begin(), pts.end());
  Grid g;
  g.times = std::move(pts);
  g.window_begin = static_cast<std::size_t>(std::find(g.times.begin(), g.times.end(), m.s) - g.times.begin());
  g.window_end = static_cast<std::size_t>(std::find(g.times.begin(), g.times.end(), m.t) - g.times.begin());
  return g;
}

struct Counts {
  std::vector<std::uint64_t> joint1, joint2, marg1, marg2;
  explicit Counts(std::size_t nq) : joint1(nq), joint2(nq), marg1(nq), marg2(nq) {}
};

void simulate_block(const Model& m, const Grid& g, const PathConfig& cfg, std::span<const JointQuery> queries,
                    std::size_t block, std::size_t paths, Counts& out) {
  RandomStream rng(cfg.seed, block);
  const int K = cfg.antithetic ? 2 : 1;
  const std::size_t units = paths / static_cast<std::size_t>(K);
  const std::size_t nq = queries.size();
  const std::size_t steps = g.times.size() - 1;
  const double ortho = std::sqrt(std::max(0.0, 1.0 - m.rho * m.rho));
  std::vector<int> hits(nq), marg(nq);

  for (std::size_t unit = 0; unit < units; ++unit) {
    double y[2] = {0.0, 0.0};
    double x[2] = {0.0, 0.0};
    double mx[2] = {-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    if (g.window_begin == 0) mx[0] = mx[1] = 0.0;
    for (std::size_t j = 0; j < steps; ++j) {
      const double h = g.times[j + 1] - g.times[j];
      const double sq = std::sqrt(h);
      const double z2 = rng.normal();
      const double z1 = m.shared ? 0.0 : rng.normal();
      const bool in_window = j >= g.window_begin && j < g.window_end;
      const double spread = in_window ? -2.0 * m.sig_y * m.sig_y * h * std::log(rng.uniform()) : 0.0;
      for (int k = 0; k < K; ++k) {
        const double sign = k == 0 ? 1.0 : -1.0;
        const double y1 = y[k] + m.mu_y * h + m.sig_y * sq * sign * z2;
        if (!m.shared) x[k] += m.mu_x * h + m.sig_x * sq * sign * (m.rho * z2 + ortho * z1);
        if (in_window) {
          const double d = y1 - y[k];
          mx[k] = std::max(mx[k], 0.5 * (y[k] + y1 + std::sqrt(d * d + spread)));
        }
        y[k] = y1;
        if (j + 1 == g.window_begin) mx[k] = y1;
      }
    }
    std::fill(hits.begin(), hits.end(), 0);
    std::fill(marg.begin(), marg.end(), 0);
    for (int k = 0; k < K; ++k) {
      const double X = m.shared ? y[k] : x[k];
      for (std::size_t q = 0; q < nq; ++q) {
        const bool below = X <= queries[q].x;
        marg[q] += below;
        hits[q] += below && mx[k] <= queries[q].y;
      }
    }
    for (std::size_t q = 0; q < nq; ++q) {
      out.joint1[q] += static_cast<std::uint64_t>(hits[q]);
      out.joint2[q] += static_cast<std::uint64_t>(hits[q] * hits[q]);
      out.marg1[q] += static_cast<std::uint64_t>(marg[q]);
      out.marg2[q] += static_cast<std::uint64_t>(marg[q] * marg[q]);
    }
  }
}

void summarize(std::uint64_t c1, std::uint64_t c2, std::size_t units, int K, std::size_t n_paths, double& mean,
               double& se) {
  // Unit values are sums over K paths; the estimate is their mean divided by K.
  const double n = static_cast<double>(units);
  const double m1 = static_cast<double>(c1) / n;
  const double m2 = static_cast<double>(c2) / n;
  mean = m1 / K;
  const double var = std::max(0.0, (m2 - m1 * m1) * n / (n - 1.0)) / (K * K);
  se = std::sqrt(var / n);
  if (!(se > 0.0)) se = 0.5 / static_cast<double>(n_paths);
}

EmpiricalJoint run(const Model& m, const PathConfig& cfg, std::span<const JointQuery> queries) {
  validate(cfg);
  if (queries.empty()) throw ConfigError("simulate_joint: no query points");
  if (std::abs(cfg.horizon - m.T) > 1e-12 * m.T)
    throw ConfigError("simulate_joint: horizon must equal the final time of the target");
  const Grid g = make_grid(m, cfg.dt);
  const std::size_t blocks = (cfg.n_paths + kBlock - 1) / kBlock;
  std::vector<Counts> per_block(blocks, Counts(queries.size()));
  parallel_for(blocks, [&](std::size_t b) {
    const std::size_t paths = std::min(kBlock, cfg.n_paths - b * kBlock);
    simulate_block(m, g, cfg, queries, b, paths, per_block[b]);
  });

  Counts total(queries.size());
  for (const auto& c : per_block)
    for (std::size_t q = 0; q < queries.size(); ++q) {
      total.joint1[q] += c.joint1[q];
      total.joint2[q] += c.joint2[q];
      total.marg1[q] += c.marg1[q];
      total.marg2[q] += c.marg2[q];
    }
  const int K = cfg.antithetic ? 2 : 1;
  std::size_t units = 0;
  for (std::size_t b = 0; b < blocks; ++b) units += std::min(kBlock, cfg.n_paths - b * kBlock) / K;

  EmpiricalJoint out;
  out.queries.assign(queries.begin(), queries.end());
  const std::size_t nq = queries.size();
  out.estimates.resize(nq);
  out.std_errors.resize(nq);
  out.x_marginal.resize(nq);
  out.x_marginal_se.resize(nq);
  for (std::size_t q = 0; q < nq; ++q) {
    summarize(total.joint1[q], total.joint2[q], units, K, cfg.n_paths, out.estimates[q], out.std_errors[q]);
    summarize(total.marg1[q], total.marg2[q], units, K, cfg.n_paths, out.x_marginal[q], out.x_marginal_se[q]);
  }
  return out;
}

}  // namespace

std::string target_name(JointTarget target) {
  switch (target) {
    case JointTarget::WtMt:
      return "WtMt";
    case JointTarget::WTMt:
      return "WTMt";
    case JointTarget::WTMst:
      return "WTMst";
    case JointTarget::B1TM2st:
      return "B1TM2st";
  }
  return "unknown";
}

void validate(const PathConfig& cfg) {
  if (cfg.n_paths < 1000) throw ConfigError("PathConfig: n_paths must be at least 1000");
  if (!(cfg.horizon > 0.0) || !std::isfinite(cfg.horizon)) throw ConfigError("PathConfig: horizon must be positive");
  if (!(cfg.dt > 0.0) || cfg.dt > cfg.horizon / 100.0 * (1.0 + 1e-12))
    throw ConfigError("PathConfig: dt must lie in (0, horizon / 100]");
  if (cfg.antithetic && cfg.n_paths % 2 != 0) throw ConfigError("PathConfig: antithetic pairs need an even n_paths");
}

EmpiricalJoint simulate_joint(JointTarget target, const BmParams& p, const PathConfig& cfg,
                              std::span<const JointQuery> queries) {
  Model m;
  m.mu_y = p.mu();
  m.sig_y = p.sigma();
  switch (target) {
    case JointTarget::WtMt:
      m.s = 0.0;
      m.t = m.T = p.t();
      break;
    case JointTarget::WTMt:
      m.s = 0.0;
      m.t = p.t();
      m.T = p.T();
      break;
    case JointTarget::WTMst:
      m.s = p.s();
      m.t = p.t();
      m.T = p.T();
      break;
    case JointTarget::B1TM2st:
      throw ConfigError("simulate_joint: B1TM2st needs correlated parameters");
  }
  return run(m, cfg, queries);
}

EmpiricalJoint simulate_joint(const CorrBmParams& p, double s, double t, double T, const PathConfig& cfg,
                              std::span<const JointQuery> queries) {
  if (!(s >= 0.0 && s < t && t <= T)) throw ConfigError("simulate_joint: need 0 <= s < t <= T");
  Model m;
  m.shared = false;
  m.mu_y = p.mu2();
  m.sig_y = p.sigma2();
  m.mu_x = p.mu1();
  m.sig_x = p.sigma1();
  m.rho = p.rho();
  m.s = s;
  m.t = t;
  m.T = T;
  return run(m, cfg, queries);
}

std::vector<ReportRow> make_report(const std::string& target, const EmpiricalJoint& mc,
                                   std::span<const double> closed_form) {
  std::vector<ReportRow> rows;
  for (std::size_t q = 0; q < mc.queries.size(); ++q) {
    ReportRow r;
    r.target = target;
    r.x = mc.queries[q].x;
    r.y = mc.queries[q].y;
    r.closed_form = closed_form[q];
    r.estimate = mc.estimates[q];
    r.std_error = mc.std_errors[q];
    r.z_score = (r.estimate - r.closed_form) / r.std_error;
    rows.push_back(r);
  }
  return rows;
}

void write_report_csv(std::ostream& out, std::span<const ReportRow> rows) {
  CsvWriter w(out);
  w.row({"target", "x", "y", "closed_form", "estimate", "std_error", "z_score"});
  for (const auto& r : rows) {
    w.field(r.target).field(r.x).field(r.y).field(r.closed_form).field(r.estimate).field(r.std_error).field(r.z_score);
    w.end_row();
  }
}

}  // namespace bmcopula
