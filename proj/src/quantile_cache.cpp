#include <math.h>  // boost 1.74 pchip calls unqualified isnan
#include <boost/math/interpolators/pchip.hpp>
#include <cmath>
#include <numbers>

#include "bmcopula/copula.hpp"
#include "bmcopula/errors.hpp"
#include "bmcopula/parallel.hpp"
#include "copula_detail.hpp"

namespace bmcopula {

struct QuantileCache::Interp {
  boost::math::interpolators::pchip<std::vector<double>> spline;
};

QuantileCache::QuantileCache(const CopulaKind& kind, double tolerance, std::size_t nodes)
    : kind_(kind), tolerance_(tolerance) {
  validate(kind);
  if (!(tolerance > 0.0)) throw DomainError("QuantileCache: tolerance must be positive");
  if (nodes < 4) throw DomainError("QuantileCache: at least 4 nodes required");
  v_.resize(nodes);
  z_.resize(nodes);
  const double n = static_cast<double>(nodes);
  for (std::size_t k = 0; k < nodes; ++k)
    v_[k] = 0.5 * (1.0 - std::cos(std::numbers::pi * (static_cast<double>(k) + 0.5) / n));
  parallel_for(nodes, [this](std::size_t k) { z_[k] = bmcopula::zeta(v_[k], kind_); });
  for (std::size_t k = 1; k < nodes; ++k)
    if (!(z_[k] > z_[k - 1])) throw ConvergenceError("QuantileCache: tabulated quantiles not increasing", z_[k] - z_[k - 1]);
  auto x = v_;
  auto y = z_;
  interp_ = new Interp{boost::math::interpolators::pchip<std::vector<double>>(std::move(x), std::move(y))};
}

QuantileCache::~QuantileCache() { delete interp_; }

QuantileCache::QuantileCache(QuantileCache&& other) noexcept
    : kind_(other.kind_), tolerance_(other.tolerance_), v_(std::move(other.v_)), z_(std::move(other.z_)),
      interp_(other.interp_) {
  other.interp_ = nullptr;
}

QuantileCache& QuantileCache::operator=(QuantileCache&& other) noexcept {
  if (this != &other) {
    delete interp_;
    kind_ = other.kind_;
    tolerance_ = other.tolerance_;
    v_ = std::move(other.v_);
    z_ = std::move(other.z_);
    interp_ = other.interp_;
    other.interp_ = nullptr;
  }
  return *this;
}

double QuantileCache::zeta(double v) const {
  if (!(v > 0.0 && v < 1.0)) throw DomainError("zeta: v must lie in (0, 1)");
  if (!interp_ || v < v_.front() || v > v_.back()) return bmcopula::zeta(v, kind_);
  double y = interp_->spline(v);
  double r = marginal_cdf(y, kind_) - v;
  if (std::abs(r) <= tolerance_) return y;
  const double f = marginal_pdf(y, kind_);
  if (f > 0.0) {
    y -= r / f;
    r = marginal_cdf(y, kind_) - v;
    if (std::abs(r) <= tolerance_) return y;
  }
  return bmcopula::zeta(v, kind_);
}

}  // namespace bmcopula
