#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <functional>
#include <random>

#include "bmcopula/bm_joint.hpp"
#include "bmcopula/errors.hpp"
#include "oracles.hpp"

using namespace bmcopula;
using boost::math::quadrature::gauss_kronrod;

namespace {

// Driftless reflection density of W_t on {M_t <= y}, reweighted by the
// Girsanov factor exp(mu w - mu^2 t / 2) and integrated over w <= min(x, y).
double girsanov_wt_mt(double x, double y, double mu, double sigma, double t) {
  if (y <= 0) return 0.0;
  const double xs = std::min(x, y) / sigma, ys = y / sigma, m = mu / sigma, rt = std::sqrt(t);
  auto f = [&](double w) {
    const double dens = (oracle::phi(w / rt) - oracle::phi((w - 2 * ys) / rt)) / rt;
    return std::exp(m * w - 0.5 * m * m * t) * dens;
  };
  const double lo = m * t - 12.0 * rt;
  if (xs <= lo) return 0.0;
  return gauss_kronrod<double, 61>::integrate(f, lo, xs, 15, 1e-13);
}

// P(W_T <= x, M_t <= y): Markov property at t, integrating over W_t.
double markov_wT_mt(double x, double y, double mu, double sigma, double t, double T) {
  if (y <= 0) return 0.0;
  const double rt = std::sqrt(t), ys = y / sigma, m = mu / sigma, tau = T - t;
  auto f = [&](double w) {
    const double dens = std::exp(m * w - 0.5 * m * m * t) * (oracle::phi(w / rt) - oracle::phi((w - 2 * ys) / rt)) / rt;
    return dens * oracle::Phi((x / sigma - w - m * tau) / std::sqrt(tau));
  };
  const double lo = m * t - 12.0 * rt;
  if (ys <= lo) return 0.0;
  return gauss_kronrod<double, 61>::integrate(f, lo, ys, 15, 1e-13);
}

// P(W_T <= x, M_(s,t) <= y): condition on W_s = w and restart.
double markov_wT_mst(double x, double y, double mu, double sigma, double s, double t, double T) {
  const double rs = std::sqrt(s);
  auto f = [&](double w) {
    const double dens = oracle::phi((w - mu * s) / (sigma * rs)) / (sigma * rs);
    return dens * markov_wT_mt(x - w, y - w, mu, sigma, t - s, T - s);
  };
  return gauss_kronrod<double, 31>::integrate(f, mu * s - 10 * sigma * rs, y, 10, 1e-11);
}

}  // namespace

TEST(Standard, ReflectionPrinciple) {
  EXPECT_NEAR(cdf_mt_std(1.0, 1.0), 0.6826894921370859, 1e-12);
  EXPECT_EQ(cdf_mt_std(0.0, 2.0), 0.0);
  EXPECT_EQ(cdf_mt_std(-1.0, 2.0), 0.0);
  EXPECT_EQ(cdf_mt_std(INFINITY, 2.0), 1.0);
  EXPECT_NEAR(cdf_wt_mt_std(0.5, 0.5, 2.0), cdf_wt_mt_std(0.5 - 1e-13, 0.5, 2.0), 1e-12);
  EXPECT_NEAR(cdf_wt_mt_std(1e6, 0.7, 2.0), cdf_mt_std(0.7, 2.0), 1e-15);
  EXPECT_THROW(cdf_mt_std(1.0, 0.0), DomainError);
  EXPECT_THROW(cdf_wt_mt_std(0.0, -1.0, 1.0), DomainError);
}

TEST(Params, Validation) {
  EXPECT_THROW(BmParams(0, 0, 0, 1, 1), DomainError);
  EXPECT_THROW(BmParams(0, 1, 0.5, 0.5, 1), DomainError);
  EXPECT_THROW(BmParams(0, 1, 0, 1, 0.5), DomainError);
  EXPECT_THROW(CorrBmParams(0, 0, 1, 1, 1.2), DomainError);
}

TEST(Drifted, GirsanovOracle) {
  for (double mu : {-2.0, -0.4, 0.0, 0.5, 3.0})
    for (double sigma : {0.7, 1.0, 1.6})
      for (auto [x, y] : {std::pair{0.2, 0.6}, {-0.5, 0.3}, {1.5, 1.0}, {0.0, 2.5}}) {
        const BmParams p = BmParams::at(mu, sigma, 1.3);
        EXPECT_NEAR(cdf_wt_mt(x, y, p), girsanov_wt_mt(x, y, mu, sigma, 1.3), 1e-11) << mu << " " << sigma;
      }
}

TEST(Drifted, ZeroDriftAndMarginal) {
  const BmParams p = BmParams::at(0.0, 1.0, 2.0);
  for (double x : {-1.0, 0.3, 0.9}) EXPECT_NEAR(cdf_wt_mt(x, 0.9, p), cdf_wt_mt_std(x, 0.9, 2.0), 1e-12);
  for (double y : {0.1, 0.9, 3.0}) EXPECT_NEAR(cdf_mt(y, p), 2 * oracle::Phi(y / std::sqrt(2.0)) - 1, 1e-12);
  const BmParams q = BmParams::at(0.3, 1.2, 1.0);
  EXPECT_EQ(cdf_mt(0.0, q), 0.0);
  EXPECT_EQ(cdf_wt_mt(0.1, -0.2, q), 0.0);
  EXPECT_NEAR(cdf_wt_mt(50.0, 0.8, q), cdf_mt(0.8, q), 1e-14);
}

TEST(Drifted, SeamContinuity) {
  std::mt19937_64 g(3);
  std::uniform_real_distribution<double> U(0.05, 3.0), M(-2.0, 2.0);
  for (int i = 0; i < 100; ++i) {
    const double y = U(g);
    const BmParams p = BmParams::at(M(g), 0.5 + U(g), U(g));
    EXPECT_NEAR(cdf_wt_mt(y, y, p), cdf_wt_mt(y * (1 - 1e-13), y, p), 1e-10);
  }
}

TEST(Drifted, LargeDriftNoOverflow) {
  const BmParams p = BmParams::at(10.0, 1.0, 1.0);
  for (double y : {0.5, 5.0, 12.0, 40.0}) {
    const double v = cdf_mt(y, p);
    EXPECT_TRUE(std::isfinite(v));
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
  EXPECT_NEAR(cdf_mt(40.0, p), 1.0, 1e-12);
  EXPECT_NEAR(cdf_wt_mt(9.0, 12.0, p), girsanov_wt_mt(9.0, 12.0, 10.0, 1.0, 1.0), 1e-10);
}

TEST(Drifted, DensityOfMaximum) {
  for (double mu : {-2.0, 0.0, 0.3, 10.0}) {
    const BmParams p = BmParams::at(mu, 1.0, 1.0);
    const double y = 0.7, h = 1e-5;
    EXPECT_NEAR(pdf_mt(y, p), (cdf_mt(y + h, p) - cdf_mt(y - h, p)) / (2 * h), 1e-6);
    const double mass =
        gauss_kronrod<double, 61>::integrate([&](double v) { return pdf_mt(v, p); }, 0.0, INFINITY, 15, 1e-12);
    EXPECT_NEAR(mass, 1.0, 1e-6) << mu;
  }
  const BmParams z = BmParams::at(0.0, 1.0, 2.0);
  EXPECT_NEAR(pdf_mt(0.8, z), 2 * oracle::phi(0.8 / std::sqrt(2.0)) / std::sqrt(2.0), 1e-12);
  EXPECT_EQ(pdf_mt(-0.1, z), 0.0);
}

TEST(Terminal, MarkovOracle) {
  for (double mu : {-1.0, 0.2, 2.0})
    for (auto [x, y] : {std::pair{0.4, 0.8}, {-0.3, 0.2}, {1.7, 1.1}}) {
      const BmParams p(mu, 1.1, 0.0, 0.5, 1.0);
      EXPECT_NEAR(cdf_wT_mt(x, y, p), markov_wT_mt(x, y, mu, 1.1, 0.5, 1.0), 1e-10) << mu << " " << x << " " << y;
    }
}

TEST(Terminal, Limits) {
  const BmParams p(0.2, 1.0, 0.0, 0.5, 1.0);
  EXPECT_NEAR(cdf_wT_mt(60.0, 0.8, p), cdf_mt(0.8, BmParams::at(0.2, 1.0, 0.5)), 1e-9);
  const BmParams near(0.2, 1.0, 0.0, 1.0 - 1e-8, 1.0);
  EXPECT_NEAR(cdf_wT_mt(0.4, 0.8, near), cdf_wt_mt(0.4, 0.8, BmParams::at(0.2, 1.0, 1.0)), 1e-6);
  const BmParams exact(0.2, 1.0, 0.0, 1.0, 1.0);
  EXPECT_NEAR(cdf_wT_mt(0.4, 0.8, exact), cdf_wt_mt(0.4, 0.8, BmParams::at(0.2, 1.0, 1.0)), 1e-12);
}

TEST(Window, MarkovOracle) {
  for (double mu : {-1.0, 0.0, 0.8})
    for (auto [x, y] : {std::pair{0.5, 0.3}, {-0.2, 0.9}, {1.0, -0.2}}) {
      const BmParams p(mu, 0.9, 0.25, 0.75, 1.0);
      EXPECT_NEAR(cdf_wT_mst(x, y, p), markov_wT_mst(x, y, mu, 0.9, 0.25, 0.75, 1.0), 1e-9)
          << mu << " " << x << " " << y;
    }
}

TEST(Window, Limits) {
  const BmParams p(0.5, 1.0, 0.25, 1.0, 1.0);
  EXPECT_NEAR(cdf_wT_mst(80.0, 0.9, p), cdf_mst(0.9, p), 1e-8);
  EXPECT_NEAR(cdf_mst(60.0, p), 1.0, 1e-14);
  const BmParams tiny(0.5, 1.0, 1e-8, 0.75, 1.0);
  const BmParams from0(0.5, 1.0, 0.0, 0.75, 1.0);
  EXPECT_NEAR(cdf_mst(0.9, tiny), cdf_mt(0.9, from0), 1e-6);
  EXPECT_NEAR(cdf_wT_mst(0.4, 0.9, tiny), cdf_wT_mt(0.4, 0.9, from0), 1e-6);
  // negative levels are reachable once the window starts after 0
  const BmParams down(-2.0, 1.0, 0.25, 0.75, 1.0);
  EXPECT_GT(cdf_mst(-0.3, down), 0.0);
  EXPECT_NEAR(cdf_mst(-30.0, down), 0.0, 1e-15);
}

TEST(Window, DensityOfMaximum) {
  const BmParams p(0.4, 1.2, 0.25, 0.75, 1.0);
  for (double y : {-0.5, 0.2, 1.4}) {
    const double h = 1e-5;
    EXPECT_NEAR(pdf_mst(y, p), (cdf_mst(y + h, p) - cdf_mst(y - h, p)) / (2 * h), 1e-6);
  }
}

TEST(Correlated, Reductions) {
  const double s = 0.25, t = 0.75, T = 1.0;
  const CorrBmParams one(0.3, 0.3, 1.2, 1.2, 1.0);
  const BmParams single(0.3, 1.2, s, t, T);
  for (auto [x, y] : {std::pair{0.2, 0.5}, {-0.4, 1.1}, {1.3, 0.1}})
    EXPECT_NEAR(cdf_b1T_m2st(x, y, one, s, t, T), cdf_wT_mst(x, y, single), 1e-6);
  const CorrBmParams zero(0.1, -0.5, 0.8, 1.3, 0.0);
  const BmParams m2(-0.5, 1.3, s, t, T);
  for (auto [x, y] : {std::pair{0.2, 0.5}, {-0.4, 1.1}})
    EXPECT_NEAR(cdf_b1T_m2st(x, y, zero, s, t, T), oracle::Phi((x - 0.1) / 0.8) * cdf_mst(y, m2), 1e-6);
}

TEST(Correlated, ConditionalGaussianOracle) {
  // B1_T given the B2 path is normal with mean mu1 T + sigma1 rho (B2_T - mu2 T) / sigma2,
  // so the joint CDF integrates that normal CDF against d/db P(B2_T <= b, M2 <= y).
  const double s = 0.25, t = 0.75, T = 1.0, mu1 = 0.2, mu2 = -0.4, s1 = 1.0, s2 = 0.8;
  const BmParams b2(mu2, s2, s, t, T);
  for (double rho : {-0.7, 0.6}) {
    const CorrBmParams p(mu1, mu2, s1, s2, rho);
    for (auto [x, y] : {std::pair{0.2, 0.5}, {-0.6, 1.2}}) {
      const double h = 1e-4;
      auto f = [&](double b) {
        const double dens = (cdf_wT_mst(b + h, y, b2) - cdf_wT_mst(b - h, y, b2)) / (2 * h);
        const double mean = mu1 * T + s1 * rho * (b - mu2 * T) / s2;
        return dens * oracle::Phi((x - mean) / (s1 * std::sqrt((1 - rho * rho) * T)));
      };
      const double ref = gauss_kronrod<double, 31>::integrate(f, mu2 * T - 9 * s2, 9 * s2, 10, 1e-10);
      EXPECT_NEAR(cdf_b1T_m2st(x, y, p, s, t, T), ref, 2e-7) << rho << " " << x << " " << y;
    }
  }
}

TEST(Joint, MonotoneAndTwoIncreasing) {
  std::mt19937_64 g(11);
  std::uniform_real_distribution<double> X(-2.0, 2.5), Y(0.0, 2.5), D(0.0, 0.5);
  const BmParams a = BmParams::at(0.4, 1.0, 1.0);
  const BmParams b(0.4, 1.0, 0.0, 0.5, 1.0);
  const BmParams c(-0.6, 1.0, 0.25, 0.75, 1.0);
  const CorrBmParams d(0.0, 0.3, 1.0, 1.0, -0.8);
  auto joints = std::vector<std::function<double(double, double)>>{
      [&](double x, double y) { return cdf_wt_mt(x, y, a); },
      [&](double x, double y) { return cdf_wT_mt(x, y, b); },
      [&](double x, double y) { return cdf_wT_mst(x, y, c); },
      [&](double x, double y) { return cdf_b1T_m2st(x, y, d, 0.25, 0.75, 1.0); },
  };
  for (const auto& F : joints)
    for (int i = 0; i < 300; ++i) {
      const double x = X(g), y = Y(g), dx = D(g), dy = D(g);
      const double f00 = F(x, y), f10 = F(x + dx, y), f01 = F(x, y + dy), f11 = F(x + dx, y + dy);
      for (double v : {f00, f10, f01, f11}) {
        EXPECT_GE(v, 0.0);
        EXPECT_LE(v, 1.0);
      }
      EXPECT_GE(f10 - f00, -1e-9);
      EXPECT_GE(f01 - f00, -1e-9);
      EXPECT_GE(f11 - f10 - f01 + f00, -1e-9);
    }
}
