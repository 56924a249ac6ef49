#include "bmcopula/bm_joint.hpp"

#include <cmath>
#include <limits>

#include "bmcopula/errors.hpp"
#include "bmcopula/gauss_kernel.hpp"

namespace bmcopula {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLimit = 1e-12;

bool start_collapsed(double s, double t) { return s < kLimit * t; }
bool end_collapsed(double t, double T) { return T - t < kLimit * T; }

void check_finite(double v, const char* what) {
  if (std::isnan(v)) throw DomainError(std::string(what) + ": NaN argument");
}

void check_times(double s, double t, double T, const char* what) {
  if (!(std::isfinite(s) && std::isfinite(t) && std::isfinite(T)) || !(s >= 0.0 && s < t && t <= T))
    throw DomainError(std::string(what) + ": time points must satisfy 0 <= s < t <= T");
}

// Markov correlation triple of (X_T, X_t, X_s) for X a Brownian motion.
CorrelationMatrix3 chain(double rho12, double rho13, double rho23) { return CorrelationMatrix3(rho12, rho13, rho23); }

}  // namespace

BmParams::BmParams(double mu, double sigma, double s, double t, double T)
    : mu_(mu), sigma_(sigma), s_(s), t_(t), T_(T) {
  if (!std::isfinite(mu)) throw DomainError("BmParams: drift must be finite");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw DomainError("BmParams: sigma must be positive");
  check_times(s, t, T, "BmParams");
}

CorrBmParams::CorrBmParams(double mu1, double mu2, double sigma1, double sigma2, double rho)
    : mu1_(mu1), mu2_(mu2), sigma1_(sigma1), sigma2_(sigma2), rho_(rho) {
  if (!std::isfinite(mu1) || !std::isfinite(mu2)) throw DomainError("CorrBmParams: drifts must be finite");
  if (!(sigma1 > 0.0) || !(sigma2 > 0.0) || !std::isfinite(sigma1) || !std::isfinite(sigma2))
    throw DomainError("CorrBmParams: sigmas must be positive");
  if (!(std::abs(rho) <= 1.0)) throw DomainError("CorrBmParams: rho outside [-1, 1]");
}

double cdf_wt_mt_std(double x, double a, double t) {
  check_finite(x, "cdf_wt_mt_std");
  if (!(t > 0.0)) throw DomainError("cdf_wt_mt_std: t must be positive");
  if (!(a >= 0.0)) throw DomainError("cdf_wt_mt_std: a must be nonnegative");
  const double st = std::sqrt(t);
  if (x <= a) return std::max(0.0, Phi(x / st) - Phi((x - 2.0 * a) / st));
  return 2.0 * Phi(a / st) - 1.0;
}

double cdf_mt_std(double a, double t) {
  check_finite(a, "cdf_mt_std");
  if (!(t > 0.0)) throw DomainError("cdf_mt_std: t must be positive");
  if (a <= 0.0) return 0.0;
  return 2.0 * Phi(a / std::sqrt(t)) - 1.0;
}

double cdf_mt(double y, const BmParams& p) {
  check_finite(y, "cdf_mt");
  if (y <= 0.0) return 0.0;
  const double sd = p.sigma() * std::sqrt(p.t());
  const double c = 2.0 * p.mu() * y / (p.sigma() * p.sigma());
  const double v = Phi((y - p.mu() * p.t()) / sd) - scaled_Phi(c, (-y - p.mu() * p.t()) / sd);
  return std::clamp(v, 0.0, 1.0);
}

double pdf_mt(double y, const BmParams& p) {
  check_finite(y, "pdf_mt");
  if (y <= 0.0 || y == kInf) return 0.0;
  const double s2 = p.sigma() * p.sigma();
  const double sd = p.sigma() * std::sqrt(p.t());
  const double a = (y - p.mu() * p.t()) / sd;
  const double b = (-y - p.mu() * p.t()) / sd;
  const double c = 2.0 * p.mu() * y / s2;
  // exp(c) phi(b) = phi(a)
  const double v = 2.0 * phi(a) / sd - (2.0 * p.mu() / s2) * scaled_Phi(c, b);
  return std::max(0.0, v);
}

double cdf_wt_mt(double x, double y, const BmParams& p) {
  check_finite(x, "cdf_wt_mt");
  check_finite(y, "cdf_wt_mt");
  if (y <= 0.0) return 0.0;
  if (x > y) return cdf_mt(y, p);
  const double sd = p.sigma() * std::sqrt(p.t());
  const double c = 2.0 * p.mu() * y / (p.sigma() * p.sigma());
  const double v = Phi((x - p.mu() * p.t()) / sd) - scaled_Phi(c, (x - 2.0 * y - p.mu() * p.t()) / sd);
  return std::clamp(v, 0.0, 1.0);
}

double cdf_wT_mt(double x, double y, const BmParams& p) {
  check_finite(x, "cdf_wT_mt");
  check_finite(y, "cdf_wT_mt");
  if (end_collapsed(p.t(), p.T())) return cdf_wt_mt(x, y, BmParams::at(p.mu(), p.sigma(), p.t()));
  if (y <= 0.0) return 0.0;
  const double mu = p.mu();
  const double sig = p.sigma();
  const double sT = sig * std::sqrt(p.T());
  const double st = sig * std::sqrt(p.t());
  const double c = 2.0 * mu * y / (sig * sig);
  const CorrelationMatrix2 r(std::sqrt(p.t() / p.T()));
  const double v = Phi2((x - mu * p.T()) / sT, (y - mu * p.t()) / st, r) -
                   scaled_Phi2(c, (x - 2.0 * y - mu * p.T()) / sT, (-y - mu * p.t()) / st, r);
  return std::clamp(v, 0.0, 1.0);
}

double cdf_mst(double y, const BmParams& p) {
  check_finite(y, "cdf_mst");
  if (start_collapsed(p.s(), p.t())) return cdf_mt(y, p);
  const double mu = p.mu();
  const double sig = p.sigma();
  const double st = sig * std::sqrt(p.t());
  const double ss = sig * std::sqrt(p.s());
  const double c = 2.0 * mu * y / (sig * sig);
  const double r = std::sqrt(p.s() / p.t());
  const double v = Phi2((y - mu * p.t()) / st, (y - mu * p.s()) / ss, CorrelationMatrix2(r)) -
                   scaled_Phi2(c, (-y - mu * p.t()) / st, (y + mu * p.s()) / ss, CorrelationMatrix2(-r));
  return std::clamp(v, 0.0, 1.0);
}

double pdf_mst(double y, const BmParams& p) {
  check_finite(y, "pdf_mst");
  if (start_collapsed(p.s(), p.t())) return pdf_mt(y, p);
  if (std::isinf(y)) return 0.0;
  const double mu = p.mu();
  const double sig = p.sigma();
  const double st = sig * std::sqrt(p.t());
  const double ss = sig * std::sqrt(p.s());
  const double c = 2.0 * mu * y / (sig * sig);
  const double r = std::sqrt(p.s() / p.t());
  const double q = std::sqrt(1.0 - r * r);
  const double a1 = (y - mu * p.t()) / st;
  const double a2 = (y - mu * p.s()) / ss;
  const double b1 = (-y - mu * p.t()) / st;
  const double b2 = (y + mu * p.s()) / ss;
  // exp(c) phi(b1) = phi(a1) and exp(c) phi(b2) = phi(a2)
  const double dt_part = phi(a1) / st * (Phi((a2 - r * a1) / q) + Phi((b2 + r * b1) / q));
  const double ds_part = phi(a2) / ss * (Phi((a1 - r * a2) / q) - Phi((b1 + r * b2) / q));
  const double drift_part = (2.0 * mu / (sig * sig)) * scaled_Phi2(c, b1, b2, CorrelationMatrix2(-r));
  return std::max(0.0, dt_part + ds_part - drift_part);
}

double cdf_wT_mst(double x, double y, const BmParams& p) {
  check_finite(x, "cdf_wT_mst");
  check_finite(y, "cdf_wT_mst");
  if (start_collapsed(p.s(), p.t())) return cdf_wT_mt(x, y, p);
  const double mu = p.mu();
  const double sig = p.sigma();
  const double s = p.s();
  const double t = p.t();
  const double T = end_collapsed(t, p.T()) ? t : p.T();
  const double sT = sig * std::sqrt(T);
  const double st = sig * std::sqrt(t);
  const double ss = sig * std::sqrt(s);
  const double c = 2.0 * mu * y / (sig * sig);
  const double rtT = std::sqrt(t / T);
  const double rsT = std::sqrt(s / T);
  const double rst = std::sqrt(s / t);
  const double v =
      Phi3((x - mu * T) / sT, (y - mu * t) / st, (y - mu * s) / ss, chain(rtT, rsT, rst)) -
      scaled_Phi3(c, (x - 2.0 * y - mu * T) / sT, (-y - mu * t) / st, (y + mu * s) / ss, chain(rtT, -rsT, -rst));
  return std::clamp(v, 0.0, 1.0);
}

double cdf_b1T_m2st(double x, double y, const CorrBmParams& p, double s, double t, double T) {
  check_finite(x, "cdf_b1T_m2st");
  check_finite(y, "cdf_b1T_m2st");
  check_times(s, t, T, "cdf_b1T_m2st");
  if (end_collapsed(t, T)) T = t;
  const double rho = p.rho();
  const double sT = p.sigma1() * std::sqrt(T);
  const double st = p.sigma2() * std::sqrt(t);
  const double c = 2.0 * p.mu2() * y / (p.sigma2() * p.sigma2());
  const double x1 = (x - p.mu1() * T) / sT;
  const double x1r = (x - 2.0 * rho * (p.sigma1() / p.sigma2()) * y - p.mu1() * T) / sT;
  const double rtT = rho * std::sqrt(t / T);

  double z3 = kInf;
  double z3r = kInf;
  double rsT = 0.0;
  double rst = 0.0;
  if (start_collapsed(s, t)) {
    if (y <= 0.0) return 0.0;
  } else {
    const double ss = p.sigma2() * std::sqrt(s);
    z3 = (y - p.mu2() * s) / ss;
    z3r = (y + p.mu2() * s) / ss;
    rsT = rho * std::sqrt(s / T);
    rst = std::sqrt(s / t);
  }
  const double v = Phi3(x1, (y - p.mu2() * t) / st, z3, chain(rtT, rsT, rst)) -
                   scaled_Phi3(c, x1r, (-y - p.mu2() * t) / st, z3r, chain(rtT, -rsT, -rst));
  return std::clamp(v, 0.0, 1.0);
}

}  // namespace bmcopula
