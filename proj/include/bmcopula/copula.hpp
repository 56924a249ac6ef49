#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace bmcopula {

// Copula families generated by a unit-scale Brownian motion and a maximum.

/// W_t against M_t, no drift.
struct BmMax {
  double t = 1.0;
};
/// W_t against M_t with drift mu.
struct BmMaxDrift {
  double mu = 0.0;
  double t = 1.0;
};
/// W_T against M_t, t <= T.
struct TerminalVsMax {
  double mu = 0.0;
  double t = 1.0;
  double T = 1.0;
};
/// W_T against the maximum over [s, t].
struct TerminalVsWindowMax {
  double mu = 0.0;
  double s = 0.25;
  double t = 0.75;
  double T = 1.0;
};
/// B1_T (no drift) against the maximum of B2 (drift mu) over [s, t], corr(B1, B2) = rho.
struct CorrTerminalVsMax {
  double mu = 0.0;
  double rho = 0.0;
  double s = 0.25;
  double t = 0.75;
  double T = 1.0;
};

using CopulaKind = std::variant<BmMax, BmMaxDrift, TerminalVsMax, TerminalVsWindowMax, CorrTerminalVsMax>;

/// Throws DomainError on a bad time ordering or |rho| > 1.
void validate(const CopulaKind& kind);
/// Command-line name, e.g. "bm-max-drift".
std::string kind_name(const CopulaKind& kind);
/// Name and parameters, e.g. "bm-max-drift mu=10 t=1".
std::string describe(const CopulaKind& kind);

struct UnitSquarePoint {
  double u = 0.5;
  double v = 0.5;
};

/// Distribution of the maximum coordinate.
double marginal_cdf(double y, const CopulaKind& kind);
double marginal_pdf(double y, const CopulaKind& kind);

/// Quantile of the maximum coordinate, |F_M(zeta) - v| <= 1e-12.
double zeta(double v, const CopulaKind& kind);

double copula_cdf(UnitSquarePoint p, const CopulaKind& kind);
/// Mixed partial derivative of copula_cdf.  Zero beyond the support seam of
/// the W_t / M_t families; on the seam itself the interior limit is returned.
double copula_density(UnitSquarePoint p, const CopulaKind& kind);
/// C(v | u) = dC/du.
double conditional_cdf(double u, double v, const CopulaKind& kind);

/// Tabulated zeta(v) on Chebyshev nodes with monotone cubic interpolation.
/// Lookups whose residual |F_M(zeta) - v| exceeds the tolerance are polished
/// by a Newton step and, failing that, solved directly.  Immutable once built.
class QuantileCache {
 public:
  explicit QuantileCache(const CopulaKind& kind, double tolerance = 1e-9, std::size_t nodes = 4096);
  ~QuantileCache();
  QuantileCache(QuantileCache&&) noexcept;
  QuantileCache& operator=(QuantileCache&&) noexcept;

  double zeta(double v) const;
  const CopulaKind& kind() const noexcept { return kind_; }
  double tolerance() const noexcept { return tolerance_; }
  std::span<const double> v_nodes() const noexcept { return v_; }
  std::span<const double> zeta_nodes() const noexcept { return z_; }

 private:
  struct Interp;
  CopulaKind kind_;
  double tolerance_;
  std::vector<double> v_;
  std::vector<double> z_;
  Interp* interp_ = nullptr;
};

double copula_cdf(UnitSquarePoint p, const QuantileCache& cache);
double copula_density(UnitSquarePoint p, const QuantileCache& cache);

struct SampleBatch {
  CopulaKind kind;
  std::uint64_t seed = 0;
  std::vector<UnitSquarePoint> points;
};

/// Conditional-inversion sampler: u uniform, then v solving C(v | u) = w for
/// an independent uniform w.  Bit-identical for a given seed on any thread count.
SampleBatch sample(std::size_t n, const CopulaKind& kind, std::uint64_t seed);

}  // namespace bmcopula
