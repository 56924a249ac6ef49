#pragma once

// Reference implementations built only on Boost and the C library, used to
// check the library against code paths it does not share.

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/owens_t.hpp>
#include <cassert>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace oracle {

inline double Phi(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }
inline double phi(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); }

// Owen's T representation; h and k must be nonzero.
inline double Phi2(double h, double k, double r) {
  if (r == 0.0) return Phi(h) * Phi(k);
  const double s = std::sqrt(1.0 - r * r);
  const double ah = (k - r * h) / (h * s);
  const double ak = (h - r * k) / (k * s);
  const double beta = h * k < 0.0 ? 0.5 : 0.0;
  return 0.5 * Phi(h) + 0.5 * Phi(k) - boost::math::owens_t(h, ah) - boost::math::owens_t(k, ak) - beta;
}

// Conditioning on the first coordinate, integrated by Boost's Gauss-Kronrod.
inline double Phi3(double z1, double z2, double z3, double r12, double r13, double r23) {
  const double s2 = std::sqrt(1.0 - r12 * r12);
  const double s3 = std::sqrt(1.0 - r13 * r13);
  const double pr = (r23 - r12 * r13) / (s2 * s3);
  auto f = [&](double s) {
    const double a = (z2 - r12 * s) / s2;
    const double b = (z3 - r13 * s) / s3;
    return phi(s) * Phi2(a == 0.0 ? 1e-300 : a, b == 0.0 ? 1e-300 : b, pr);
  };
  if (z1 <= -12.0) return 0.0;
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, -12.0, std::min(z1, 12.0), 10, 1e-14);
}

// r holds r12, r13, r14, r23, r24, r34.
inline double Phi4(const double z[4], const double r[6]) {
  const double s2 = std::sqrt(1.0 - r[0] * r[0]);
  const double s3 = std::sqrt(1.0 - r[1] * r[1]);
  const double s4 = std::sqrt(1.0 - r[2] * r[2]);
  const double p23 = (r[3] - r[0] * r[1]) / (s2 * s3);
  const double p24 = (r[4] - r[0] * r[2]) / (s2 * s4);
  const double p34 = (r[5] - r[1] * r[2]) / (s3 * s4);
  auto f = [&](double s) {
    return phi(s) * Phi3((z[1] - r[0] * s) / s2, (z[2] - r[1] * s) / s3, (z[3] - r[2] * s) / s4, p23, p24, p34);
  };
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, -12.0, z[0], 12, 1e-12);
}

}  // namespace oracle
