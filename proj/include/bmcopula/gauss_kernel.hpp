#pragma once

#include <array>

namespace bmcopula {

/// Correlation of a standard bivariate normal pair.
class CorrelationMatrix2 {
 public:
  explicit CorrelationMatrix2(double rho);
  double rho() const noexcept { return rho_; }

 private:
  double rho_;
};

/// Validated 3x3 correlation matrix.
///
/// Construction rejects |rho| > 1 and matrices whose smallest eigenvalue is
/// below -1e-12.  A matrix with smallest eigenvalue in (-1e-12, 1e-9) and no
/// exactly-degenerate pair is pulled back inside the cone by shrinking every
/// off-diagonal entry by 1 - 1e-9; projected() then reports true.
class CorrelationMatrix3 {
 public:
  CorrelationMatrix3(double rho12, double rho13, double rho23);

  double rho12() const noexcept { return r_[0]; }
  double rho13() const noexcept { return r_[1]; }
  double rho23() const noexcept { return r_[2]; }
  /// Entry (i, j), zero-based.
  double operator()(int i, int j) const noexcept;
  bool projected() const noexcept { return projected_; }

 private:
  std::array<double, 3> r_;
  bool projected_ = false;
};

/// Validated 4x4 correlation matrix, same PSD policy as CorrelationMatrix3.
/// Entries are given in the order rho12, rho13, rho14, rho23, rho24, rho34.
class CorrelationMatrix4 {
 public:
  explicit CorrelationMatrix4(const std::array<double, 6>& upper);

  double operator()(int i, int j) const noexcept;
  bool projected() const noexcept { return projected_; }

 private:
  std::array<double, 6> r_;
  bool projected_ = false;
};

double phi(double z);
double log_phi(double z);
double Phi(double z);
/// log Phi with full relative accuracy in the lower tail (asymptotic series below -8).
double log_Phi(double z);
double Phi_inv(double p);

double Phi2(double z1, double z2, const CorrelationMatrix2& r);
double Phi3(double z1, double z2, double z3, const CorrelationMatrix3& r);
double Phi4(const std::array<double, 4>& z, const CorrelationMatrix4& r);

/// Relative-accuracy logarithms of the multivariate CDFs, usable deep in the
/// lower tail where the plain CDFs lose all significant digits.
double log_Phi2(double z1, double z2, const CorrelationMatrix2& r);
double log_Phi3(double z1, double z2, double z3, const CorrelationMatrix3& r);

/// exp(log_scale) * Phi_k(...), evaluated without overflow when the
/// exponential factor is huge and the CDF correspondingly tiny.
double scaled_Phi(double log_scale, double z);
double scaled_Phi2(double log_scale, double z1, double z2, const CorrelationMatrix2& r);
double scaled_Phi3(double log_scale, double z1, double z2, double z3, const CorrelationMatrix3& r);

/// P(X2 <= z2 | X1 = z1) for a standard bivariate normal pair; at |rho| = 1 an indicator.
double Phi_given_first(double z1, double z2, const CorrelationMatrix2& r);
/// P(X2 <= z2, X3 <= z3 | X1 = z1) for a standard trivariate normal vector.
double Phi2_given_first(double z1, double z2, double z3, const CorrelationMatrix3& r);
double log_Phi_given_first(double z1, double z2, const CorrelationMatrix2& r);
double log_Phi2_given_first(double z1, double z2, double z3, const CorrelationMatrix3& r);

}  // namespace bmcopula
