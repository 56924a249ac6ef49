#include "bmcopula/gauss_kernel.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <boost/math/special_functions/erf.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "bmcopula/errors.hpp"
#include "bmcopula/quadrature.hpp"

namespace bmcopula {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLogSqrt2Pi = 0.91893853320467274178;  // log(sqrt(2 pi))
// Pairs closer than this to +-1 are treated as exactly degenerate.
constexpr double kDegenerate = 4.0 * std::numeric_limits<double>::epsilon();
// Lower truncation of the conditioning integral: Phi(-9) ~ 1.1e-19.
constexpr double kCut = 9.0;
// Below this value the plain CDF no longer carries ~10 significant digits
// and the logarithmic routines switch to the tail-safe integral.
constexpr double kTailSwitch = 1e-3;

void check_not_nan(double z, const char* what) {
  if (std::isnan(z)) throw DomainError(std::string(what) + ": NaN argument");
}

void check_rho(double rho, const char* what) {
  if (std::isnan(rho) || std::abs(rho) > 1.0 + 1e-15)
    throw DomainError(std::string(what) + ": correlation outside [-1, 1]");
}

double clamp_rho(double rho) { return std::clamp(rho, -1.0, 1.0); }

// ---------------------------------------------------------------------------
// Bivariate normal, Genz's BVNU (Drezner-Wesolowsky with Genz refinements).
// Returns P(X > dh, Y > dk).

constexpr double kW6[3] = {0.1713244923791705, 0.3607615730481384, 0.4679139345726904};
constexpr double kX6[3] = {0.9324695142031522, 0.6612093864662647, 0.2386191860831970};
constexpr double kW12[6] = {0.04717533638651177, 0.1069393259953183, 0.1600783285433464,
                            0.2031674267230659,  0.2334925365383547, 0.2491470458134029};
constexpr double kX12[6] = {0.9815606342467191, 0.9041172563704750, 0.7699026741943050,
                            0.5873179542866171, 0.3678314989981802, 0.1252334085114692};
constexpr double kW20[10] = {0.01761400713915212, 0.04060142980038694, 0.06267204833410906,
                             0.08327674157670475, 0.1019301198172404,  0.1181945319615184,
                             0.1316886384491766,  0.1420961093183821,  0.1491729864726037,
                             0.1527533871307259};
constexpr double kX20[10] = {0.9931285991850949, 0.9639719272779138, 0.9122344282513259,
                             0.8391169718222188, 0.7463319064601508, 0.6360536807265150,
                             0.5108670019508271, 0.3737060887154196, 0.2277858511416451,
                             0.07652652113349733};

double bvnu(double dh, double dk, double r) {
  if (dh == kInf || dk == kInf) return 0.0;
  if (dh == -kInf) return dk == -kInf ? 1.0 : Phi(-dk);
  if (dk == -kInf) return Phi(-dh);
  if (r == 0.0) return Phi(-dh) * Phi(-dk);

  constexpr double tp = 2.0 * std::numbers::pi;
  double h = dh;
  double k = dk;
  double hk = h * k;
  double bvn = 0.0;

  const double* w = kW20;
  const double* x = kX20;
  int n = 10;
  if (std::abs(r) < 0.3) {
    w = kW6;
    x = kX6;
    n = 3;
  } else if (std::abs(r) < 0.75) {
    w = kW12;
    x = kX12;
    n = 6;
  }

  if (std::abs(r) < 0.925) {
    const double hs = (h * h + k * k) / 2.0;
    const double asr = std::asin(r) / 2.0;
    for (int i = 0; i < n; ++i) {
      for (double sgn : {-1.0, 1.0}) {
        const double sn = std::sin(asr * (1.0 + sgn * x[i]));
        bvn += w[i] * std::exp((sn * hk - hs) / (1.0 - sn * sn));
      }
    }
    bvn = bvn * asr / tp + Phi(-h) * Phi(-k);
  } else {
    if (r < 0.0) {
      k = -k;
      hk = -hk;
    }
    if (std::abs(r) < 1.0) {
      const double as = 1.0 - r * r;
      double a = std::sqrt(as);
      const double bs = (h - k) * (h - k);
      double asr = -(bs / as + hk) / 2.0;
      const double c = (4.0 - hk) / 8.0;
      const double d = (12.0 - hk) / 80.0;
      if (asr > -100.0) bvn = a * std::exp(asr) * (1.0 - c * (bs - as) * (1.0 - d * bs) / 3.0 + c * d * as * as);
      if (hk > -100.0) {
        const double b = std::sqrt(bs);
        const double sp = std::sqrt(tp) * Phi(-b / a);
        bvn -= std::exp(-hk / 2.0) * sp * b * (1.0 - c * bs * (1.0 - d * bs) / 3.0);
      }
      a /= 2.0;
      double sum = 0.0;
      for (int i = 0; i < n; ++i) {
        for (double sgn : {-1.0, 1.0}) {
          const double ax = a * (1.0 + sgn * x[i]);
          const double xs = ax * ax;
          asr = -(bs / xs + hk) / 2.0;
          if (asr > -100.0) {
            const double sp = 1.0 + c * xs * (1.0 + 5.0 * d * xs);
            const double rs = std::sqrt(1.0 - xs);
            const double ep = std::exp(-(hk / 2.0) * xs / ((1.0 + rs) * (1.0 + rs))) / rs;
            sum += w[i] * std::exp(asr) * (sp - ep);
          }
        }
      }
      bvn = (a * sum - bvn) / tp;
    }
    if (r > 0.0) {
      bvn += Phi(-std::max(h, k));
    } else if (h >= k) {
      bvn = -bvn;
    } else {
      const double L = h < 0.0 ? Phi(k) - Phi(h) : Phi(-h) - Phi(-k);
      bvn = L - bvn;
    }
  }
  return std::clamp(bvn, 0.0, 1.0);
}

double bvn_lower(double z1, double z2, double r) { return bvnu(-z1, -z2, r); }

// ---------------------------------------------------------------------------
// Generic small-dimension problem P(X_i <= z_i, i < d), X ~ N(0, R).

struct Mvn {
  int d = 0;
  std::array<double, 4> z{};
  std::array<std::array<double, 4>, 4> r{};

  void drop(int j) {
    for (int i = j; i + 1 < d; ++i) {
      z[i] = z[i + 1];
      for (int k = 0; k < d; ++k) r[i][k] = r[i + 1][k];
    }
    for (int i = 0; i + 1 < d; ++i)
      for (int k = j; k + 1 < d; ++k) r[i][k] = r[i][k + 1];
    --d;
  }
};

enum class Trivial { kNone, kZero, kOne };

// Removes +inf coordinates and detects -inf ones.
Trivial strip_infinite(Mvn& p) {
  for (int i = 0; i < p.d; ++i)
    if (p.z[i] == -kInf) return Trivial::kZero;
  for (int i = p.d - 1; i >= 0; --i)
    if (p.z[i] == kInf) p.drop(i);
  return p.d == 0 ? Trivial::kOne : Trivial::kNone;
}

struct DegeneratePair {
  int i = -1;
  int j = -1;
  bool positive = true;
};

DegeneratePair find_degenerate(const Mvn& p) {
  for (int i = 0; i < p.d; ++i)
    for (int j = i + 1; j < p.d; ++j) {
      if (p.r[i][j] >= 1.0 - kDegenerate) return {i, j, true};
      if (p.r[i][j] <= -1.0 + kDegenerate) return {i, j, false};
    }
  return {};
}

// Conditioning on coordinate m: the remaining coordinates become
// (z_j - r_jm s) / sqrt(1 - r_jm^2) with partial correlations.
struct Conditioned {
  Mvn base;  // z holds offsets; call at(s) for the shifted problem
  std::array<double, 4> slope{};
  std::array<double, 4> scale{};
  double upper = kInf;

  Mvn at(double s) const {
    Mvn q = base;
    for (int j = 0; j < q.d; ++j) q.z[j] = (base.z[j] - slope[j] * s) / scale[j];
    return q;
  }
};

Conditioned condition_on(const Mvn& p, int m) {
  Conditioned c;
  c.upper = p.z[m];
  c.base.d = p.d - 1;
  std::array<int, 4> idx{};
  for (int i = 0, k = 0; i < p.d; ++i)
    if (i != m) idx[k++] = i;
  for (int a = 0; a < c.base.d; ++a) {
    const int i = idx[a];
    c.base.z[a] = p.z[i];
    c.slope[a] = p.r[i][m];
    c.scale[a] = std::sqrt(std::max(0.0, 1.0 - p.r[i][m] * p.r[i][m]));
  }
  for (int a = 0; a < c.base.d; ++a) {
    c.base.r[a][a] = 1.0;
    for (int b = a + 1; b < c.base.d; ++b) {
      const int i = idx[a];
      const int j = idx[b];
      const double v = clamp_rho((p.r[i][j] - p.r[i][m] * p.r[j][m]) / (c.scale[a] * c.scale[b]));
      c.base.r[a][b] = v;
      c.base.r[b][a] = v;
    }
  }
  return c;
}

double steepness(double rho) {
  const double s = 1.0 - rho * rho;
  return s <= 0.0 ? kInf : std::abs(rho) / std::sqrt(s);
}

// Picks the coordinate to integrate over: shallow conditional arguments
// first, and among shallow choices one that leaves independent coordinates.
int choose_pivot(const Mvn& p) {
  int best = 0;
  double best_steep = kInf;
  int independent = -1;
  for (int m = 0; m < p.d; ++m) {
    double steep = 0.0;
    for (int j = 0; j < p.d; ++j)
      if (j != m) steep = std::max(steep, steepness(p.r[j][m]));
    if (steep < best_steep) {
      best_steep = steep;
      best = m;
    }
    if (p.d == 3 && steep < 3.0) {
      const int a = m == 0 ? 1 : 0;
      const int b = m == 2 ? 1 : 2;
      const double num = p.r[a][b] - p.r[a][m] * p.r[b][m];
      if (std::abs(num) < 1e-12 && independent < 0) independent = m;
    }
  }
  return independent >= 0 ? independent : best;
}

double cdf_abs(Mvn p);

double conditioned_abs(const Mvn& p) {
  const int m = choose_pivot(p);
  const Conditioned c = condition_on(p, m);
  const double hi = std::min(c.upper, kCut);
  if (hi <= -kCut) return 0.0;

  std::vector<double> cuts;
  for (int j = 0; j < c.base.d; ++j) {
    if (std::abs(c.slope[j]) > 0.3) {
      const double s = c.base.z[j] / c.slope[j];
      if (s > -kCut && s < hi) cuts.push_back(s);
    }
  }
  std::sort(cuts.begin(), cuts.end());

  Integrand f;
  if (c.base.d == 2 && std::abs(c.base.r[0][1]) < 1e-14) {
    f = [&c](double s) {
      return phi(s) * Phi((c.base.z[0] - c.slope[0] * s) / c.scale[0]) *
             Phi((c.base.z[1] - c.slope[1] * s) / c.scale[1]);
    };
  } else {
    f = [&c](double s) { return phi(s) * cdf_abs(c.at(s)); };
  }
  QuadratureOptions opt;
  opt.abs_tol = 2e-14;
  opt.rel_tol = 1e-12;
  opt.max_subdivisions = 300;
  const auto r = integrate_adaptive(f, -kCut, hi, opt, cuts);
  if (!r.converged && r.error > 1e-10)
    throw ConvergenceError("normal CDF conditioning quadrature did not converge", r.error);
  return std::clamp(r.value, 0.0, 1.0);
}

double cdf_abs(Mvn p) {
  switch (strip_infinite(p)) {
    case Trivial::kZero:
      return 0.0;
    case Trivial::kOne:
      return 1.0;
    case Trivial::kNone:
      break;
  }
  if (p.d == 1) return Phi(p.z[0]);
  const auto deg = find_degenerate(p);
  if (deg.i >= 0) {
    if (deg.positive) {
      p.z[deg.i] = std::min(p.z[deg.i], p.z[deg.j]);
      p.drop(deg.j);
      return cdf_abs(p);
    }
    // X_j = -X_i: the event is -z_j <= X_i <= z_i.
    if (p.z[deg.i] <= -p.z[deg.j]) return 0.0;
    const double lower_edge = -p.z[deg.j];
    p.drop(deg.j);
    Mvn q = p;
    q.z[deg.i] = lower_edge;
    return std::max(0.0, cdf_abs(p) - cdf_abs(q));
  }
  if (p.d == 2) return bvn_lower(p.z[0], p.z[1], p.r[0][1]);
  return conditioned_abs(p);
}

double log_cdf(Mvn p);

double conditioned_log(const Mvn& p) {
  int m = 0;
  if (p.d == 2) {
    m = p.z[0] <= p.z[1] ? 0 : 1;
  } else {
    m = choose_pivot(p);
  }
  const Conditioned c = condition_on(p, m);
  Integrand g;
  if (c.base.d == 1) {
    g = [&c](double s) { return log_phi(s) + log_Phi((c.base.z[0] - c.slope[0] * s) / c.scale[0]); };
  } else if (c.base.d == 2 && std::abs(c.base.r[0][1]) < 1e-14) {
    g = [&c](double s) {
      return log_phi(s) + log_Phi((c.base.z[0] - c.slope[0] * s) / c.scale[0]) +
             log_Phi((c.base.z[1] - c.slope[1] * s) / c.scale[1]);
    };
  } else {
    g = [&c](double s) { return log_phi(s) + log_cdf(c.at(s)); };
  }
  return log_integrate_log_concave(g, std::min(c.upper, 40.0));
}

double log_cdf(Mvn p) {
  switch (strip_infinite(p)) {
    case Trivial::kZero:
      return -kInf;
    case Trivial::kOne:
      return 0.0;
    case Trivial::kNone:
      break;
  }
  if (p.d == 1) return log_Phi(p.z[0]);
  const auto deg = find_degenerate(p);
  if (deg.i >= 0) {
    if (deg.positive) {
      p.z[deg.i] = std::min(p.z[deg.i], p.z[deg.j]);
      p.drop(deg.j);
      return log_cdf(p);
    }
    if (p.z[deg.i] <= -p.z[deg.j]) return -kInf;
    const double lower_edge = -p.z[deg.j];
    p.drop(deg.j);
    Mvn q = p;
    q.z[deg.i] = lower_edge;
    const double l1 = log_cdf(p);
    const double l2 = log_cdf(q);
    if (!(l2 < l1)) return -kInf;
    return l1 + std::log1p(-std::exp(l2 - l1));
  }
  const double plain = cdf_abs(p);
  if (plain >= kTailSwitch) return std::log(plain);
  return conditioned_log(p);
}

// ---------------------------------------------------------------------------

template <int N>
bool psd_status(const std::array<std::array<double, 4>, 4>& m, double& min_eig) {
  Eigen::Matrix<double, N, N> a;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) a(i, j) = m[i][j];
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, N, N>> es(a, Eigen::EigenvaluesOnly);
  min_eig = es.eigenvalues().minCoeff();
  return min_eig >= -1e-12;
}

template <int N>
bool validate_and_project(std::array<std::array<double, 4>, 4>& m, const char* what) {
  bool exact_degenerate = false;
  for (int i = 0; i < N; ++i)
    for (int j = i + 1; j < N; ++j) {
      check_rho(m[i][j], what);
      m[i][j] = m[j][i] = clamp_rho(m[i][j]);
      if (std::abs(m[i][j]) >= 1.0 - kDegenerate) exact_degenerate = true;
    }
  double min_eig = 0.0;
  if (!psd_status<N>(m, min_eig)) throw DomainError(std::string(what) + ": matrix is not positive semi-definite");
  if (!exact_degenerate && min_eig < 1e-9) {
    constexpr double shrink = 1.0 - 1e-9;
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j)
        if (i != j) m[i][j] *= shrink;
    return true;
  }
  return false;
}

Mvn make3(double z1, double z2, double z3, const CorrelationMatrix3& r) {
  Mvn p;
  p.d = 3;
  p.z = {z1, z2, z3, 0.0};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) p.r[i][j] = r(i, j);
  return p;
}

}  // namespace

// ---------------------------------------------------------------------------

CorrelationMatrix2::CorrelationMatrix2(double rho) : rho_(rho) {
  check_rho(rho, "CorrelationMatrix2");
  rho_ = clamp_rho(rho);
}

CorrelationMatrix3::CorrelationMatrix3(double rho12, double rho13, double rho23) {
  std::array<std::array<double, 4>, 4> m{};
  m[0] = {1.0, rho12, rho13, 0.0};
  m[1] = {rho12, 1.0, rho23, 0.0};
  m[2] = {rho13, rho23, 1.0, 0.0};
  projected_ = validate_and_project<3>(m, "CorrelationMatrix3");
  r_ = {m[0][1], m[0][2], m[1][2]};
}

double CorrelationMatrix3::operator()(int i, int j) const noexcept {
  if (i == j) return 1.0;
  const int a = std::min(i, j);
  const int b = std::max(i, j);
  if (a == 0) return b == 1 ? r_[0] : r_[1];
  return r_[2];
}

namespace {
constexpr int index4(int a, int b) {
  // (0,1)->0 (0,2)->1 (0,3)->2 (1,2)->3 (1,3)->4 (2,3)->5
  return a == 0 ? b - 1 : (a == 1 ? b + 1 : 5);
}
}  // namespace

CorrelationMatrix4::CorrelationMatrix4(const std::array<double, 6>& upper) {
  std::array<std::array<double, 4>, 4> m{};
  for (int i = 0; i < 4; ++i) {
    m[i][i] = 1.0;
    for (int j = i + 1; j < 4; ++j) m[i][j] = m[j][i] = upper[index4(i, j)];
  }
  projected_ = validate_and_project<4>(m, "CorrelationMatrix4");
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) r_[index4(i, j)] = m[i][j];
}

double CorrelationMatrix4::operator()(int i, int j) const noexcept {
  if (i == j) return 1.0;
  return r_[index4(std::min(i, j), std::max(i, j))];
}

double phi(double z) {
  if (!std::isfinite(z)) throw DomainError("phi: argument must be finite");
  return std::exp(-0.5 * z * z - kLogSqrt2Pi);
}

double log_phi(double z) { return -0.5 * z * z - kLogSqrt2Pi; }

double Phi(double z) {
  check_not_nan(z, "Phi");
  return 0.5 * std::erfc(-z * std::numbers::sqrt2 / 2.0);
}

double log_Phi(double z) {
  check_not_nan(z, "log_Phi");
  if (z == kInf) return 0.0;
  if (z == -kInf) return -kInf;
  if (z > 0.0) return std::log1p(-0.5 * std::erfc(z * std::numbers::sqrt2 / 2.0));
  if (z >= -8.0) return std::log(0.5 * std::erfc(-z * std::numbers::sqrt2 / 2.0));
  // Phi(z) = phi(z)/|z| * sum_k (-1)^k (2k-1)!! / z^(2k)
  const double inv2 = 1.0 / (z * z);
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 40; ++k) {
    const double next = -term * (2.0 * k - 1.0) * inv2;
    if (std::abs(next) >= std::abs(term)) break;
    term = next;
    sum += term;
    if (std::abs(term) < 1e-17) break;
  }
  return log_phi(z) - std::log(-z) + std::log(sum);
}

double Phi_inv(double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("Phi_inv: probability must lie in (0, 1)");
  if (p < 0.5) return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
  return std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * (1.0 - p));
}

double Phi2(double z1, double z2, const CorrelationMatrix2& r) {
  check_not_nan(z1, "Phi2");
  check_not_nan(z2, "Phi2");
  const double rho = r.rho();
  if (z1 == -kInf || z2 == -kInf) return 0.0;
  if (rho >= 1.0 - kDegenerate) return Phi(std::min(z1, z2));
  if (rho <= -1.0 + kDegenerate) return std::max(0.0, Phi(z1) - Phi(-z2));
  return bvn_lower(z1, z2, rho);
}

double Phi3(double z1, double z2, double z3, const CorrelationMatrix3& r) {
  check_not_nan(z1, "Phi3");
  check_not_nan(z2, "Phi3");
  check_not_nan(z3, "Phi3");
  return cdf_abs(make3(z1, z2, z3, r));
}

double Phi4(const std::array<double, 4>& z, const CorrelationMatrix4& r) {
  Mvn p;
  p.d = 4;
  for (int i = 0; i < 4; ++i) {
    check_not_nan(z[i], "Phi4");
    p.z[i] = z[i];
    for (int j = 0; j < 4; ++j) p.r[i][j] = r(i, j);
  }
  return cdf_abs(p);
}

double log_Phi2(double z1, double z2, const CorrelationMatrix2& r) {
  check_not_nan(z1, "log_Phi2");
  check_not_nan(z2, "log_Phi2");
  Mvn p;
  p.d = 2;
  p.z = {z1, z2, 0.0, 0.0};
  p.r[0][0] = p.r[1][1] = 1.0;
  p.r[0][1] = p.r[1][0] = r.rho();
  return log_cdf(p);
}

double log_Phi3(double z1, double z2, double z3, const CorrelationMatrix3& r) {
  check_not_nan(z1, "log_Phi3");
  check_not_nan(z2, "log_Phi3");
  check_not_nan(z3, "log_Phi3");
  return log_cdf(make3(z1, z2, z3, r));
}

double scaled_Phi(double log_scale, double z) {
  if (log_scale <= 0.0 || z > -5.0) return std::exp(log_scale) * Phi(z);
  return std::exp(log_scale + log_Phi(z));
}

double scaled_Phi2(double log_scale, double z1, double z2, const CorrelationMatrix2& r) {
  const double plain = Phi2(z1, z2, r);
  if (log_scale <= 0.7 || plain >= kTailSwitch) return std::exp(log_scale) * plain;
  return std::exp(log_scale + log_Phi2(z1, z2, r));
}

double scaled_Phi3(double log_scale, double z1, double z2, double z3, const CorrelationMatrix3& r) {
  const double plain = Phi3(z1, z2, z3, r);
  if (log_scale <= 0.7 || plain >= kTailSwitch) return std::exp(log_scale) * plain;
  return std::exp(log_scale + log_Phi3(z1, z2, z3, r));
}

double Phi_given_first(double z1, double z2, const CorrelationMatrix2& r) {
  check_not_nan(z1, "Phi_given_first");
  check_not_nan(z2, "Phi_given_first");
  const double rho = r.rho();
  if (rho >= 1.0 - kDegenerate) return z1 <= z2 ? 1.0 : 0.0;
  if (rho <= -1.0 + kDegenerate) return -z1 <= z2 ? 1.0 : 0.0;
  return Phi((z2 - rho * z1) / std::sqrt(1.0 - rho * rho));
}

double log_Phi_given_first(double z1, double z2, const CorrelationMatrix2& r) {
  const double rho = r.rho();
  if (std::abs(rho) >= 1.0 - kDegenerate) return Phi_given_first(z1, z2, r) > 0.0 ? 0.0 : -kInf;
  return log_Phi((z2 - rho * z1) / std::sqrt(1.0 - rho * rho));
}

namespace {

// Conditional problem of (X2, X3) given X1 = z1; returns false when the
// conditioning is degenerate and the answer is the indicator `value`.
struct GivenFirst {
  bool degenerate = false;
  bool indicator = false;
  double a = 0.0;
  double b = 0.0;
  double r = 0.0;
  // Degenerate in exactly one coordinate: remaining univariate term.
  bool univariate = false;
};

GivenFirst given_first(double z1, double z2, double z3, const CorrelationMatrix3& R) {
  GivenFirst g;
  const double r12 = R.rho12();
  const double r13 = R.rho13();
  auto pinned = [&](double rho, double z) {
    // X_j = sign(rho) X_1 exactly.
    return rho > 0.0 ? z1 <= z : -z1 <= z;
  };
  const bool d2 = std::abs(r12) >= 1.0 - kDegenerate;
  const bool d3 = std::abs(r13) >= 1.0 - kDegenerate;
  if (d2 && d3) {
    g.degenerate = true;
    g.indicator = pinned(r12, z2) && pinned(r13, z3);
    return g;
  }
  if (d2 || d3) {
    g.degenerate = true;
    g.univariate = true;
    g.indicator = d2 ? pinned(r12, z2) : pinned(r13, z3);
    const double rho = d2 ? r13 : r12;
    const double z = d2 ? z3 : z2;
    g.a = (z - rho * z1) / std::sqrt(1.0 - rho * rho);
    return g;
  }
  const double s2 = std::sqrt(1.0 - r12 * r12);
  const double s3 = std::sqrt(1.0 - r13 * r13);
  g.a = (z2 - r12 * z1) / s2;
  g.b = (z3 - r13 * z1) / s3;
  g.r = clamp_rho((R.rho23() - r12 * r13) / (s2 * s3));
  return g;
}

}  // namespace

double Phi2_given_first(double z1, double z2, double z3, const CorrelationMatrix3& r) {
  check_not_nan(z1, "Phi2_given_first");
  check_not_nan(z2, "Phi2_given_first");
  check_not_nan(z3, "Phi2_given_first");
  const auto g = given_first(z1, z2, z3, r);
  if (g.degenerate) {
    if (!g.indicator) return 0.0;
    return g.univariate ? Phi(g.a) : 1.0;
  }
  return Phi2(g.a, g.b, CorrelationMatrix2(g.r));
}

double log_Phi2_given_first(double z1, double z2, double z3, const CorrelationMatrix3& r) {
  const auto g = given_first(z1, z2, z3, r);
  if (g.degenerate) {
    if (!g.indicator) return -kInf;
    return g.univariate ? log_Phi(g.a) : 0.0;
  }
  return log_Phi2(g.a, g.b, CorrelationMatrix2(g.r));
}

}  // namespace bmcopula
