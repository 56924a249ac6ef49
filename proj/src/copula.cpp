#include "bmcopula/copula.hpp"

#include <algorithm>
#include <boost/math/tools/toms748_solve.hpp>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <sstream>

#include "bmcopula/bm_joint.hpp"
#include "bmcopula/errors.hpp"
#include "bmcopula/gauss_kernel.hpp"
#include "copula_detail.hpp"

namespace bmcopula {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kLimit = 1e-12;

// Common parametrisation: B1_T = mu_x T + sqrt(T) p against the maximum of a
// (mu, 1) Brownian motion over [s, t]; rho = 1 for the single-motion kinds.
struct Shape {
  double mu = 0.0;
  double rho = 1.0;
  double s = 0.0;
  double t = 1.0;
  double T = 1.0;
  bool window = false;
};

Shape shape_of(const CopulaKind& kind) {
  Shape sh;
  std::visit(
      [&sh](const auto& k) {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, BmMax>) {
          sh.t = sh.T = k.t;
        } else if constexpr (std::is_same_v<K, BmMaxDrift>) {
          sh.mu = k.mu;
          sh.t = sh.T = k.t;
        } else if constexpr (std::is_same_v<K, TerminalVsMax>) {
          sh.mu = k.mu;
          sh.t = k.t;
          sh.T = k.T;
        } else if constexpr (std::is_same_v<K, TerminalVsWindowMax>) {
          sh.mu = k.mu;
          sh.s = k.s;
          sh.t = k.t;
          sh.T = k.T;
          sh.window = true;
        } else {
          sh.mu = k.mu;
          sh.rho = k.rho;
          sh.s = k.s;
          sh.t = k.t;
          sh.T = k.T;
          sh.window = true;
        }
      },
      kind);
  if (sh.window && sh.s < kLimit * sh.t) {
    sh.window = false;
    sh.s = 0.0;
  }
  if (sh.T - sh.t < kLimit * sh.T) sh.T = sh.t;
  return sh;
}

BmParams marginal_params(const CopulaKind& kind) {
  const Shape sh = shape_of(kind);
  return BmParams(sh.mu, 1.0, sh.s, sh.t, sh.T);
}

std::string fmt(double x) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << x;
  return os.str();
}

bool is_unit_interior(double x) { return x > 0.0 && x < 1.0; }

void check_unit(double x, const char* what) {
  if (std::isnan(x) || x < 0.0 || x > 1.0) throw DomainError(std::string(what) + ": coordinate outside [0, 1]");
}

}  // namespace

void validate(const CopulaKind& kind) {
  std::visit(
      [](const auto& k) {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, BmMax>) {
          BmParams(0.0, 1.0, 0.0, k.t, k.t);
        } else if constexpr (std::is_same_v<K, BmMaxDrift>) {
          BmParams(k.mu, 1.0, 0.0, k.t, k.t);
        } else if constexpr (std::is_same_v<K, TerminalVsMax>) {
          BmParams(k.mu, 1.0, 0.0, k.t, k.T);
        } else if constexpr (std::is_same_v<K, TerminalVsWindowMax>) {
          BmParams(k.mu, 1.0, k.s, k.t, k.T);
        } else {
          BmParams(k.mu, 1.0, k.s, k.t, k.T);
          CorrBmParams(0.0, k.mu, 1.0, 1.0, k.rho);
        }
      },
      kind);
}

std::string kind_name(const CopulaKind& kind) {
  static constexpr const char* names[] = {"bm-max", "bm-max-drift", "terminal-vs-max", "terminal-vs-window-max",
                                          "corr-terminal-vs-max"};
  return names[kind.index()];
}

std::string describe(const CopulaKind& kind) {
  std::string out = kind_name(kind);
  std::visit(
      [&out](const auto& k) {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, BmMax>) {
          out += " t=" + fmt(k.t);
        } else if constexpr (std::is_same_v<K, BmMaxDrift>) {
          out += " mu=" + fmt(k.mu) + " t=" + fmt(k.t);
        } else if constexpr (std::is_same_v<K, TerminalVsMax>) {
          out += " mu=" + fmt(k.mu) + " t=" + fmt(k.t) + " T=" + fmt(k.T);
        } else if constexpr (std::is_same_v<K, TerminalVsWindowMax>) {
          out += " mu=" + fmt(k.mu) + " s=" + fmt(k.s) + " t=" + fmt(k.t) + " T=" + fmt(k.T);
        } else {
          out += " mu=" + fmt(k.mu) + " rho=" + fmt(k.rho) + " s=" + fmt(k.s) + " t=" + fmt(k.t) + " T=" + fmt(k.T);
        }
      },
      kind);
  return out;
}

double marginal_cdf(double y, const CopulaKind& kind) {
  const Shape sh = shape_of(kind);
  const BmParams p = marginal_params(kind);
  return sh.window ? cdf_mst(y, p) : cdf_mt(y, p);
}

double marginal_pdf(double y, const CopulaKind& kind) {
  const Shape sh = shape_of(kind);
  const BmParams p = marginal_params(kind);
  return sh.window ? pdf_mst(y, p) : pdf_mt(y, p);
}

namespace detail {

bool max_from_origin(const CopulaKind& kind) { return !shape_of(kind).window; }

double upper_guess(const CopulaKind& kind) {
  const Shape sh = shape_of(kind);
  return std::max(1.0, sh.mu * sh.t + 6.0 * std::sqrt(sh.t));
}

double solve_increasing(const std::function<double(double)>& f, double target, bool from_origin, double start) {
  double lo = from_origin ? 0.0 : -1.0;
  double flo = f(lo) - target;
  if (!from_origin) {
    while (flo >= 0.0) {
      lo *= 2.0;
      if (lo < -1e6) return kNaN;
      flo = f(lo) - target;
    }
  } else if (flo >= 0.0) {
    return lo;
  }
  double hi = std::max(start, lo + 1.0);
  double fhi = f(hi) - target;
  while (fhi < 0.0) {
    lo = hi;
    flo = fhi;
    hi *= 2.0;
    if (hi > 1e6) return kNaN;
    fhi = f(hi) - target;
  }
  if (fhi == 0.0) return hi;
  const auto g = [&](double y) { return f(y) - target; };
  const auto tol = [](double a, double b) { return std::abs(b - a) <= 1e-14 * std::max(1.0, std::abs(a)); };
  std::uintmax_t iters = 200;
  const auto r = boost::math::tools::toms748_solve(g, lo, hi, flo, fhi, tol, iters);
  return 0.5 * (r.first + r.second);
}

double conditional_at(const CopulaKind& kind, double p, double y) {
  const Shape sh = shape_of(kind);
  const double mu = sh.mu;
  const double rho = sh.rho;
  const double sT = std::sqrt(sh.T);
  const double st = std::sqrt(sh.t);
  const double pr = p - 2.0 * rho * y / sT;
  // log of exp(2 mu y) phi(pr) / phi(p)
  const double log_ratio = 2.0 * mu * y + 0.5 * (p * p - pr * pr);
  double h = 0.0;
  if (!sh.window) {
    if (y <= 0.0) return 0.0;
    const double a = (y - mu * sh.t) / st;
    const double b = (-y - mu * sh.t) / st;
    const double r = rho * std::sqrt(sh.t / sh.T);
    if (r >= 1.0) {
      // P(M_t <= y | W_t = x) = 1 - exp(-2 y (y - x) / t) for x <= y
      if (p > a) return 0.0;
      return std::clamp(-std::expm1(log_ratio), 0.0, 1.0);
    }
    const CorrelationMatrix2 R(r);
    h = Phi_given_first(p, a, R) - std::exp(log_ratio + log_Phi_given_first(pr, b, R));
  } else {
    const double ss = std::sqrt(sh.s);
    const double a1 = (y - mu * sh.t) / st;
    const double a2 = (y - mu * sh.s) / ss;
    const double b1 = (-y - mu * sh.t) / st;
    const double b2 = (y + mu * sh.s) / ss;
    const double rtT = rho * std::sqrt(sh.t / sh.T);
    const double rsT = rho * std::sqrt(sh.s / sh.T);
    const double rst = std::sqrt(sh.s / sh.t);
    h = Phi2_given_first(p, a1, a2, CorrelationMatrix3(rtT, rsT, rst)) -
        std::exp(log_ratio + log_Phi2_given_first(pr, b1, b2, CorrelationMatrix3(rtT, -rsT, -rst)));
  }
  return std::clamp(h, 0.0, 1.0);
}

double cdf_at(const CopulaKind& kind, double u, double v, double y) {
  const double p = Phi_inv(u);
  if (const auto* k = std::get_if<BmMax>(&kind)) {
    if (u > 0.5 * (v + 1.0)) return v;
    return std::clamp(u - Phi(p - 2.0 * y / std::sqrt(k->t)), 0.0, 1.0);
  }
  if (const auto* k = std::get_if<BmMaxDrift>(&kind)) {
    const double st = std::sqrt(k->t);
    if (u > Phi((y - k->mu * k->t) / st)) return v;
    return std::clamp(u - scaled_Phi(2.0 * k->mu * y, p - 2.0 * y / st), 0.0, 1.0);
  }
  if (const auto* k = std::get_if<TerminalVsMax>(&kind))
    return cdf_wT_mt(k->mu * k->T + std::sqrt(k->T) * p, y, BmParams(k->mu, 1.0, 0.0, k->t, k->T));
  if (const auto* k = std::get_if<TerminalVsWindowMax>(&kind))
    return cdf_wT_mst(k->mu * k->T + std::sqrt(k->T) * p, y, BmParams(k->mu, 1.0, k->s, k->t, k->T));
  const auto& k = std::get<CorrTerminalVsMax>(kind);
  return cdf_b1T_m2st(std::sqrt(k.T) * p, y, CorrBmParams(0.0, k.mu, 1.0, 1.0, k.rho), k.s, k.t, k.T);
}

double density_at(const CopulaKind& kind, double u, double y) {
  const double p = Phi_inv(u);
  if (const auto* k = std::get_if<BmMax>(&kind)) {
    const double q = y / std::sqrt(k->t);
    if (p > q) return 0.0;
    const double d = 2.0 * q - p;
    // d phi(d) / (phi(q) phi(p))
    return d * std::exp(-0.5 * d * d + 0.5 * q * q + 0.5 * p * p) * std::sqrt(2.0 * std::numbers::pi);
  }
  if (const auto* k = std::get_if<BmMaxDrift>(&kind)) {
    const double st = std::sqrt(k->t);
    if (p > (y - k->mu * k->t) / st) return 0.0;
    const double log_ratio = 2.0 * k->mu * y + 2.0 * p * y / st - 2.0 * y * y / k->t;
    const double slope = (2.0 * y / st - p) / st - k->mu;
    const double f = pdf_mt(y, BmParams(k->mu, 1.0, 0.0, k->t, k->t));
    if (!(f > 0.0)) return 0.0;
    return std::max(0.0, 2.0 * std::exp(log_ratio) * slope / f);
  }
  // d/dy of the conditional distribution by Richardson-extrapolated central differences.
  const Shape sh = shape_of(kind);
  double delta = 2e-3 * std::sqrt(sh.t);
  if (!sh.window) delta = std::min(delta, 0.25 * y);
  if (!(delta > 0.0)) return 0.0;
  const auto D = [&](double d) {
    return (conditional_at(kind, p, y + d) - conditional_at(kind, p, y - d)) / (2.0 * d);
  };
  const double slope = (4.0 * D(0.5 * delta) - D(delta)) / 3.0;
  const double f = marginal_pdf(y, kind);
  if (!(f > 0.0)) return 0.0;
  return std::max(0.0, slope / f);
}

}  // namespace detail

double zeta(double v, const CopulaKind& kind) {
  if (!is_unit_interior(v)) throw DomainError("zeta: v must lie in (0, 1)");
  validate(kind);
  if (const auto* k = std::get_if<BmMax>(&kind)) return std::sqrt(k->t) * Phi_inv(0.5 * (v + 1.0));
  const auto F = [&kind](double y) { return marginal_cdf(y, kind); };
  const double y = detail::solve_increasing(F, v, detail::max_from_origin(kind), detail::upper_guess(kind));
  if (std::isnan(y)) throw DomainError("zeta: could not bracket the quantile");
  return y;
}

double copula_cdf(UnitSquarePoint pt, const CopulaKind& kind) {
  check_unit(pt.u, "copula_cdf");
  check_unit(pt.v, "copula_cdf");
  if (pt.u == 0.0 || pt.v == 0.0) return 0.0;
  if (pt.u == 1.0) return pt.v;
  if (pt.v == 1.0) return pt.u;
  return detail::cdf_at(kind, pt.u, pt.v, zeta(pt.v, kind));
}

double copula_density(UnitSquarePoint pt, const CopulaKind& kind) {
  check_unit(pt.u, "copula_density");
  check_unit(pt.v, "copula_density");
  if (!is_unit_interior(pt.u) || !is_unit_interior(pt.v)) return 0.0;
  return detail::density_at(kind, pt.u, zeta(pt.v, kind));
}

double conditional_cdf(double u, double v, const CopulaKind& kind) {
  if (!is_unit_interior(u)) throw DomainError("conditional_cdf: u must lie in (0, 1)");
  check_unit(v, "conditional_cdf");
  if (v == 0.0) return 0.0;
  if (v == 1.0) return 1.0;
  return detail::conditional_at(kind, Phi_inv(u), zeta(v, kind));
}

double copula_cdf(UnitSquarePoint pt, const QuantileCache& cache) {
  check_unit(pt.u, "copula_cdf");
  check_unit(pt.v, "copula_cdf");
  if (pt.u == 0.0 || pt.v == 0.0) return 0.0;
  if (pt.u == 1.0) return pt.v;
  if (pt.v == 1.0) return pt.u;
  return detail::cdf_at(cache.kind(), pt.u, pt.v, cache.zeta(pt.v));
}

double copula_density(UnitSquarePoint pt, const QuantileCache& cache) {
  check_unit(pt.u, "copula_density");
  check_unit(pt.v, "copula_density");
  if (!is_unit_interior(pt.u) || !is_unit_interior(pt.v)) return 0.0;
  return detail::density_at(cache.kind(), pt.u, cache.zeta(pt.v));
}

}  // namespace bmcopula
