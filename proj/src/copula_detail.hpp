#pragma once

#include <functional>

#include "bmcopula/copula.hpp"

namespace bmcopula::detail {

// Evaluation once the quantile y = zeta(v) of the maximum coordinate is known.
double cdf_at(const CopulaKind& kind, double u, double v, double y);
double density_at(const CopulaKind& kind, double u, double y);

/// dC/du as a function of p = Phi^-1(u) and the maximum coordinate y.
double conditional_at(const CopulaKind& kind, double p, double y);

/// True when the maximum coordinate is bounded below by 0.
bool max_from_origin(const CopulaKind& kind);

/// Smallest y with f(y) >= target for nondecreasing f, bracketed by doubling
/// from [0 or -1, start] and refined by TOMS 748 to a bracket width of
/// ~1e-14 relative.  Returns NaN when no bracket is found.
double solve_increasing(const std::function<double(double)>& f, double target, bool from_origin, double start);

/// Starting upper bracket for y.
double upper_guess(const CopulaKind& kind);

}  // namespace bmcopula::detail
