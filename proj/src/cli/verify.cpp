#include <algorithm>
#include <cmath>

#include "bmcopula/bm_joint.hpp"
#include "bmcopula/cli.hpp"
#include "bmcopula/gauss_kernel.hpp"
#include "bmcopula/integral_identities.hpp"
#include "bmcopula/rng.hpp"

namespace bmcopula::cli {
namespace {

const BmParams kWtMt = BmParams::at(0.3, 1.1, 1.0);
const BmParams kWTMt(0.3, 1.1, 0.0, 0.5, 1.0);
const BmParams kWTMst(-0.4, 0.9, 0.25, 0.75, 1.0);
const CorrBmParams kCorr(0.2, -0.4, 1.0, 0.8, 0.6);
constexpr double kCorrS = 0.25, kCorrT = 0.75, kCorrTT = 1.0;

// Largest residual of the symmetry and complement identities of Phi2 / Phi3.
double kernel_identity_residual(std::size_t n, std::uint64_t seed) {
  RandomStream rng(seed, 1);
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double z1 = 1.5 * rng.normal(), z2 = 1.5 * rng.normal(), z3 = 1.5 * rng.normal();
    const double r = 2.0 * rng.uniform() - 1.0;
    const CorrelationMatrix2 R(r), Rn(-r);
    worst = std::max(worst, std::abs(Phi2(z1, z2, R) - Phi2(z2, z1, R)));
    worst = std::max(worst, std::abs(Phi(z1) - Phi2(z1, z2, R) - Phi2(z1, -z2, Rn)));

    double a[3];
    for (auto& c : a) c = rng.normal();
    double b[3];
    for (auto& c : b) c = rng.normal();
    const double na = std::hypot(a[0], a[1], a[2]), nb = std::hypot(b[0], b[1], b[2]);
    // third row spans a and b with a random weight
    const double w = rng.uniform();
    double c[3];
    for (int k = 0; k < 3; ++k) c[k] = w * a[k] / na + (1 - w) * b[k] / nb + 0.3 * rng.normal();
    const double nc = std::hypot(c[0], c[1], c[2]);
    const double r12 = (a[0] * b[0] + a[1] * b[1] + a[2] * b[2]) / (na * nb);
    const double r13 = (a[0] * c[0] + a[1] * c[1] + a[2] * c[2]) / (na * nc);
    const double r23 = (b[0] * c[0] + b[1] * c[1] + b[2] * c[2]) / (nb * nc);
    const double base = Phi3(z1, z2, z3, CorrelationMatrix3(r12, r13, r23));
    worst = std::max(worst, std::abs(base - Phi3(z2, z1, z3, CorrelationMatrix3(r12, r23, r13))));
    worst = std::max(worst, std::abs(base - Phi3(z3, z1, z2, CorrelationMatrix3(r13, r23, r12))));
    worst = std::max(worst, std::abs(Phi2(z2, z3, CorrelationMatrix2(r23)) - base -
                                     Phi3(-z1, z2, z3, CorrelationMatrix3(-r12, -r13, r23))));
  }
  return worst;
}

CheckResult make_check(std::string suite, std::string name, double value, double tol, bool counted = true) {
  return CheckResult{std::move(suite), std::move(name), value, tol, value <= tol, counted};
}

}  // namespace

bool VerifyReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return !c.counted || c.pass; });
}

std::vector<McSuite> mc_suites() {
  const double xs[5] = {-1.0, -0.3, 0.3, 1.0, 2.0};
  const double ys[4] = {0.3, 0.8, 1.5, 2.5};
  std::vector<McSuite> out;
  for (JointTarget target : {JointTarget::WtMt, JointTarget::WTMt, JointTarget::WTMst, JointTarget::B1TM2st}) {
    McSuite s{target, {}, {}};
    for (double y : ys)
      for (double x : xs) {
        s.queries.push_back({x, y});
        switch (target) {
          case JointTarget::WtMt:
            s.closed_form.push_back(cdf_wt_mt(x, y, kWtMt));
            break;
          case JointTarget::WTMt:
            s.closed_form.push_back(cdf_wT_mt(x, y, kWTMt));
            break;
          case JointTarget::WTMst:
            s.closed_form.push_back(cdf_wT_mst(x, y, kWTMst));
            break;
          case JointTarget::B1TM2st:
            s.closed_form.push_back(cdf_b1T_m2st(x, y, kCorr, kCorrS, kCorrT, kCorrTT));
            break;
        }
      }
    out.push_back(std::move(s));
  }
  return out;
}

EmpiricalJoint run_mc_suite(const McSuite& suite, const PathConfig& base) {
  PathConfig cfg = base;
  switch (suite.target) {
    case JointTarget::WtMt:
      cfg.horizon = kWtMt.t();
      cfg.dt = cfg.horizon / 100.0;
      return simulate_joint(suite.target, kWtMt, cfg, suite.queries);
    case JointTarget::WTMt:
      cfg.horizon = kWTMt.T();
      cfg.dt = cfg.horizon / 100.0;
      return simulate_joint(suite.target, kWTMt, cfg, suite.queries);
    case JointTarget::WTMst:
      cfg.horizon = kWTMst.T();
      cfg.dt = cfg.horizon / 100.0;
      return simulate_joint(suite.target, kWTMst, cfg, suite.queries);
    case JointTarget::B1TM2st:
      break;
  }
  cfg.horizon = kCorrTT;
  cfg.dt = cfg.horizon / 100.0;
  return simulate_joint(kCorr, kCorrS, kCorrT, kCorrTT, cfg, suite.queries);
}

VerifyReport run_verify(const VerifyOptions& opt) {
  const double k = opt.tolerance_scale;
  VerifyReport rep;

  rep.checks.push_back(make_check("kernel", "Phi2/Phi3 identities, 1000 draws",
                                  kernel_identity_residual(1000, opt.seed), 1e-7 * k));
  rep.checks.push_back(
      make_check("lemma", "bivariate identities, 1000 draws", check_lemma_identities(1000, opt.seed), 1e-7 * k));

  for (int v = 0; v < 6; ++v) {
    const auto variant = static_cast<IdentityVariant>(v);
    double printed = 0.0, shifted = 0.0;
    for (std::uint64_t i = 0; i < 50; ++i) {
      const IntegralSpec sp = random_integral_spec(opt.seed, i);
      printed = std::max(printed, check_integral_identity(sp, variant, RStarIndexing::Printed));
      shifted = std::max(shifted, check_integral_identity(sp, variant, RStarIndexing::Shifted));
    }
    rep.checks.push_back(make_check("integral", variant_name(variant) + ", 50 specs", printed, 1e-6 * k));
    rep.checks.push_back(
        make_check("integral-shifted", variant_name(variant) + ", 50 specs", shifted, 1e-6 * k, false));
  }

  PathConfig cfg;
  cfg.n_paths = opt.n_paths;
  cfg.seed = opt.seed;
  const double zmax = (opt.quick ? 4.0 : 3.0) * k;
  for (const auto& suite : mc_suites()) {
    const auto mc = run_mc_suite(suite, cfg);
    const auto rows = make_report(target_name(suite.target), mc, suite.closed_form);
    double worst = 0.0;
    std::size_t over2 = 0;
    for (const auto& r : rows) {
      worst = std::max(worst, std::abs(r.z_score));
      if (std::abs(r.z_score) > 2.0 * k) ++over2;
    }
    rep.checks.push_back(make_check("monte-carlo", target_name(suite.target) + " max |z|", worst, zmax));
    if (!opt.quick)
      rep.checks.push_back(make_check("monte-carlo", target_name(suite.target) + " points with |z| > 2",
                                      static_cast<double>(over2), 2.0));
    rep.mc_rows.insert(rep.mc_rows.end(), rows.begin(), rows.end());
  }
  return rep;
}

}  // namespace bmcopula::cli
