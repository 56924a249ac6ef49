#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>

#include "bmcopula/gauss_kernel.hpp"

namespace bmcopula {

/// Constants of the Gaussian-integral identities
///   int exp(h s) Phi_k((delta_i + theta_i s) / eta_i; R) phi((s - delta_0) / eta_0) ds / eta_0
/// over (-inf, a] or [a, inf).
struct IntegralSpec {
  double h = 0.0;
  double a = 0.0;
  std::array<double, 4> delta{};  // delta_0..delta_3
  std::array<double, 3> theta{};  // theta_1..theta_3
  std::array<double, 4> eta{1.0, 1.0, 1.0, 1.0};
  CorrelationMatrix3 R{0.0, 0.0, 0.0};
};

/// Dimension of the closed form and side of the integral.  The Phi4 pair
/// integrates a trivariate CDF, Phi3 a bivariate one (delta_3 dropped) and
/// Phi2 a univariate one (delta_2, delta_3 dropped).
enum class IdentityVariant { Phi4_lower, Phi4_upper, Phi3_lower, Phi3_upper, Phi2_lower, Phi2_upper };
std::string variant_name(IdentityVariant v);

/// Entries rho*_{2,i+1}, i = 2, 3 of the augmented correlation matrix use
/// rho_{1i} (Printed) or rho_{1,i-1} with rho_11 = 1 (Shifted).
enum class RStarIndexing { Printed, Shifted };

struct IdentityCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;  // |lhs - rhs|; infinite when the closed form is undefined
};

/// Throws DomainError unless every eta > 0.
void validate(const IntegralSpec& spec);

/// Left-hand side by adaptive quadrature over the exponentially tilted
/// Gaussian weight truncated at 10 standard deviations.
double identity_lhs(const IntegralSpec& spec, IdentityVariant variant);
/// Closed form; throws DomainError when the augmented matrix is not a correlation matrix.
double identity_rhs(const IntegralSpec& spec, IdentityVariant variant, RStarIndexing indexing = RStarIndexing::Printed);

IdentityCheck evaluate_integral_identity(const IntegralSpec& spec, IdentityVariant variant,
                                         RStarIndexing indexing = RStarIndexing::Printed);
double check_integral_identity(const IntegralSpec& spec, IdentityVariant variant,
                               RStarIndexing indexing = RStarIndexing::Printed);

/// Reproducible random spec: h, a, delta, theta uniform on moderate ranges,
/// eta in [0.5, 1.5] and R the Gram matrix of three random unit vectors.
IntegralSpec random_integral_spec(std::uint64_t seed, std::uint64_t index);

/// Largest residual of the two bivariate identities
///   Phi2(z1, z2; -rho) + Phi2(-z1, z3; -sqrt(1 - rho^2)) = Phi(z2) Phi(z3)
///   Phi2(z1, z2; -rho) + Phi(-z2) Phi(z3) = Phi2(z1, z3; sqrt(1 - rho^2))
/// with z1 = -rho z2 + sqrt(1 - rho^2) z3, over n_trials random (rho, z2, z3).
double check_lemma_identities(std::size_t n_trials, std::uint64_t seed);

/// Residuals of both identities at one point; rho in [0, 1].
std::array<double, 2> lemma_residuals(double rho, double z2, double z3);

}  // namespace bmcopula
