#pragma once

namespace bmcopula {

/// Drift, scale and time points of a one-dimensional Brownian motion
/// W_u = mu u + sigma B_u.  Requires sigma > 0 and 0 <= s < t <= T.
class BmParams {
 public:
  BmParams(double mu, double sigma, double s, double t, double T);
  /// s = 0 and T = t.
  static BmParams at(double mu, double sigma, double t) { return BmParams(mu, sigma, 0.0, t, t); }

  double mu() const noexcept { return mu_; }
  double sigma() const noexcept { return sigma_; }
  double s() const noexcept { return s_; }
  double t() const noexcept { return t_; }
  double T() const noexcept { return T_; }

 private:
  double mu_, sigma_, s_, t_, T_;
};

/// Correlated pair B1 = sigma1 (rho W2 + sqrt(1 - rho^2) W1) + mu1 u,
/// B2 = sigma2 W2 + mu2 u.
class CorrBmParams {
 public:
  CorrBmParams(double mu1, double mu2, double sigma1, double sigma2, double rho);

  double mu1() const noexcept { return mu1_; }
  double mu2() const noexcept { return mu2_; }
  double sigma1() const noexcept { return sigma1_; }
  double sigma2() const noexcept { return sigma2_; }
  double rho() const noexcept { return rho_; }

 private:
  double mu1_, mu2_, sigma1_, sigma2_, rho_;
};

// Standard Brownian motion (mu = 0, sigma = 1).
double cdf_wt_mt_std(double x, double a, double t);
double cdf_mt_std(double a, double t);

/// P(W_t <= x, M_t <= y) with M_t the maximum over [0, t]; 0 for y < 0.
double cdf_wt_mt(double x, double y, const BmParams& p);
/// P(M_t <= y); 0 for y < 0.
double cdf_mt(double y, const BmParams& p);
double pdf_mt(double y, const BmParams& p);

/// P(W_T <= x, M_t <= y), t <= T.
double cdf_wT_mt(double x, double y, const BmParams& p);

/// P(W_T <= x, M_(s,t) <= y) with M_(s,t) the maximum over [s, t].  Any real y.
double cdf_wT_mst(double x, double y, const BmParams& p);
/// P(M_(s,t) <= y).
double cdf_mst(double y, const BmParams& p);
double pdf_mst(double y, const BmParams& p);

/// P(B1_T <= x, M2_(s,t) <= y) for the correlated pair.
double cdf_b1T_m2st(double x, double y, const CorrBmParams& p, double s, double t, double T);

}  // namespace bmcopula
