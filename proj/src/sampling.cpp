#include <algorithm>
#include <cmath>
#include <limits>

#include "bmcopula/copula.hpp"
#include "bmcopula/errors.hpp"
#include "bmcopula/gauss_kernel.hpp"
#include "bmcopula/parallel.hpp"
#include "bmcopula/rng.hpp"
#include "copula_detail.hpp"

namespace bmcopula {
namespace {

constexpr std::size_t kBlock = 1024;

double clamp_open(double v) {
  return std::clamp(v, std::numeric_limits<double>::min(), std::nextafter(1.0, 0.0));
}

double draw_v(const CopulaKind& kind, double u, double w) {
  const double p = Phi_inv(u);
  double y = 0.0;
  if (std::holds_alternative<BmMax>(kind) || std::holds_alternative<BmMaxDrift>(kind)) {
    // Given W_t = x the maximum satisfies P(M_t <= y) = 1 - exp(-2 y (y - x) / t).
    const double mu = std::holds_alternative<BmMaxDrift>(kind) ? std::get<BmMaxDrift>(kind).mu : 0.0;
    const double t = std::holds_alternative<BmMaxDrift>(kind) ? std::get<BmMaxDrift>(kind).t : std::get<BmMax>(kind).t;
    const double x = mu * t + std::sqrt(t) * p;
    y = 0.5 * (x + std::sqrt(x * x - 2.0 * t * std::log1p(-w)));
  } else {
    const auto h = [&](double yy) { return detail::conditional_at(kind, p, yy); };
    y = detail::solve_increasing(h, w, detail::max_from_origin(kind), detail::upper_guess(kind));
    if (!std::isfinite(y)) throw InversionError("sample: conditional inversion failed", u, w);
  }
  const double v = marginal_cdf(y, kind);
  if (!std::isfinite(v)) throw InversionError("sample: conditional inversion failed", u, w);
  return clamp_open(v);
}

}  // namespace

SampleBatch sample(std::size_t n, const CopulaKind& kind, std::uint64_t seed) {
  if (n < 1) throw DomainError("sample: n must be at least 1");
  validate(kind);
  SampleBatch batch{kind, seed, std::vector<UnitSquarePoint>(n)};
  const std::size_t blocks = (n + kBlock - 1) / kBlock;
  parallel_for(blocks, [&](std::size_t b) {
    RandomStream rng(seed, b);
    const std::size_t end = std::min(n, (b + 1) * kBlock);
    for (std::size_t i = b * kBlock; i < end; ++i) {
      const double u = rng.uniform();
      const double w = rng.uniform();
      batch.points[i] = UnitSquarePoint{u, draw_v(kind, u, w)};
    }
  });
  return batch;
}

}  // namespace bmcopula
