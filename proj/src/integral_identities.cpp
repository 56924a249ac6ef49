#include "bmcopula/integral_identities.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bmcopula/errors.hpp"
#include "bmcopula/quadrature.hpp"
#include "bmcopula/rng.hpp"

namespace bmcopula {
namespace {

int dimension(IdentityVariant v) {
  switch (v) {
    case IdentityVariant::Phi4_lower:
    case IdentityVariant::Phi4_upper:
      return 3;
    case IdentityVariant::Phi3_lower:
    case IdentityVariant::Phi3_upper:
      return 2;
    default:
      return 1;
  }
}

bool is_lower(IdentityVariant v) {
  return v == IdentityVariant::Phi4_lower || v == IdentityVariant::Phi3_lower || v == IdentityVariant::Phi2_lower;
}

double inner_cdf(const IntegralSpec& sp, int dim, double s) {
  double z[3] = {};
  for (int i = 0; i < dim; ++i) z[i] = (sp.delta[i + 1] + sp.theta[i] * s) / sp.eta[i + 1];
  switch (dim) {
    case 1:
      return Phi(z[0]);
    case 2:
      return Phi2(z[0], z[1], CorrelationMatrix2(sp.R.rho12()));
    default:
      return Phi3(z[0], z[1], z[2], sp.R);
  }
}

}  // namespace

std::string variant_name(IdentityVariant v) {
  static constexpr const char* names[] = {"Phi4_lower", "Phi4_upper", "Phi3_lower",
                                          "Phi3_upper", "Phi2_lower", "Phi2_upper"};
  return names[static_cast<int>(v)];
}

void validate(const IntegralSpec& spec) {
  for (double e : spec.eta)
    if (!(e > 0.0) || !std::isfinite(e)) throw DomainError("IntegralSpec: every eta must be positive");
}

double identity_lhs(const IntegralSpec& sp, IdentityVariant variant) {
  validate(sp);
  const int dim = dimension(variant);
  const double eta0 = sp.eta[0];
  const double centre = sp.delta[0] + sp.h * eta0 * eta0;
  double lo = centre - 10.0 * eta0;
  double hi = centre + 10.0 * eta0;
  if (is_lower(variant))
    hi = std::min(hi, sp.a);
  else
    lo = std::max(lo, sp.a);
  if (!(hi > lo)) return 0.0;
  const Integrand f = [&](double s) {
    const double w = (s - sp.delta[0]) / eta0;
    return std::exp(sp.h * s - 0.5 * w * w) / (eta0 * 2.5066282746310002) * inner_cdf(sp, dim, s);
  };
  QuadratureOptions opt;
  opt.abs_tol = 1e-11;
  opt.rel_tol = 1e-11;
  opt.max_subdivisions = 500;
  return integrate(f, lo, hi, opt);
}

double identity_rhs(const IntegralSpec& sp, IdentityVariant variant, RStarIndexing indexing) {
  validate(sp);
  const int dim = dimension(variant);
  const double eta0 = sp.eta[0];
  const double d0 = sp.delta[0] + sp.h * eta0 * eta0;
  const double scale = std::exp(sp.h * sp.delta[0] + 0.5 * sp.h * sp.h * eta0 * eta0);
  const double sign = is_lower(variant) ? 1.0 : -1.0;

  std::array<double, 3> kappa{};
  std::array<double, 3> z{};
  std::array<double, 3> first{};  // rho*_{1,i+1}
  for (int i = 0; i < 3; ++i) {
    kappa[i] = std::sqrt(sp.theta[i] * sp.theta[i] * eta0 * eta0 + sp.eta[i + 1] * sp.eta[i + 1]);
    z[i] = (sp.delta[i + 1] + sp.theta[i] * d0) / kappa[i];
    first[i] = -sign * sp.theta[i] * eta0 / kappa[i];
  }
  // rho*_{i+1,j+1}, zero-based i < j
  auto cross = [&](int i, int j) {
    double r = sp.R(i, j);
    if (indexing == RStarIndexing::Shifted && i == 0) r = j == 1 ? 1.0 : sp.R(0, 1);
    return (r * sp.eta[i + 1] * sp.eta[j + 1] + sp.theta[i] * sp.theta[j] * eta0 * eta0) / (kappa[i] * kappa[j]);
  };
  const double z0 = sign * (sp.a - d0) / eta0;

  double value = 0.0;
  switch (dim) {
    case 1:
      value = Phi2(z0, z[0], CorrelationMatrix2(first[0]));
      break;
    case 2:
      value = Phi3(z0, z[0], z[1], CorrelationMatrix3(first[0], first[1], cross(0, 1)));
      break;
    default:
      value = Phi4({z0, z[0], z[1], z[2]},
                   CorrelationMatrix4({first[0], first[1], first[2], cross(0, 1), cross(0, 2), cross(1, 2)}));
      break;
  }
  return scale * value;
}

IdentityCheck evaluate_integral_identity(const IntegralSpec& spec, IdentityVariant variant, RStarIndexing indexing) {
  IdentityCheck c;
  c.lhs = identity_lhs(spec, variant);
  try {
    c.rhs = identity_rhs(spec, variant, indexing);
    c.residual = std::abs(c.lhs - c.rhs);
  } catch (const DomainError&) {
    c.rhs = std::numeric_limits<double>::quiet_NaN();
    c.residual = std::numeric_limits<double>::infinity();
  }
  return c;
}

double check_integral_identity(const IntegralSpec& spec, IdentityVariant variant, RStarIndexing indexing) {
  return evaluate_integral_identity(spec, variant, indexing).residual;
}

IntegralSpec random_integral_spec(std::uint64_t seed, std::uint64_t index) {
  RandomStream rng(seed, index);
  auto uni = [&rng](double lo, double hi) { return lo + (hi - lo) * rng.uniform(); };
  IntegralSpec sp;
  sp.h = uni(-0.5, 0.5);
  sp.a = uni(-1.5, 1.5);
  for (auto& d : sp.delta) d = uni(-1.0, 1.0);
  for (auto& t : sp.theta) t = uni(-1.5, 1.5);
  for (auto& e : sp.eta) e = uni(0.5, 1.5);
  std::array<std::array<double, 3>, 3> vec{};
  for (auto& v : vec) {
    double norm = 0.0;
    for (auto& c : v) {
      c = rng.normal();
      norm += c * c;
    }
    norm = std::sqrt(norm);
    for (auto& c : v) c /= norm;
  }
  auto dot = [&vec](int i, int j) {
    return vec[i][0] * vec[j][0] + vec[i][1] * vec[j][1] + vec[i][2] * vec[j][2];
  };
  sp.R = CorrelationMatrix3(dot(0, 1), dot(0, 2), dot(1, 2));
  return sp;
}

std::array<double, 2> lemma_residuals(double rho, double z2, double z3) {
  if (!(rho >= 0.0 && rho <= 1.0)) throw DomainError("lemma_residuals: rho must lie in [0, 1]");
  const double c = std::sqrt(std::max(0.0, 1.0 - rho * rho));
  const double z1 = -rho * z2 + c * z3;
  const double base = Phi2(z1, z2, CorrelationMatrix2(-rho));
  const double r13 = std::abs(base + Phi2(-z1, z3, CorrelationMatrix2(-c)) - Phi(z2) * Phi(z3));
  const double r14 = std::abs(base + Phi(-z2) * Phi(z3) - Phi2(z1, z3, CorrelationMatrix2(c)));
  return {r13, r14};
}

double check_lemma_identities(std::size_t n_trials, std::uint64_t seed) {
  if (n_trials < 100) throw DomainError("check_lemma_identities: at least 100 trials required");
  RandomStream rng(seed, 0);
  double worst = 0.0;
  for (std::size_t i = 0; i < n_trials; ++i) {
    const double rho = rng.uniform();
    const double z2 = 1.5 * rng.normal();
    const double z3 = 1.5 * rng.normal();
    const auto r = lemma_residuals(rho, z2, z3);
    worst = std::max({worst, r[0], r[1]});
  }
  return worst;
}

}  // namespace bmcopula
