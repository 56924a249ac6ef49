#pragma once

#include <functional>
#include <span>

namespace bmcopula {

struct QuadratureOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  int max_subdivisions = 400;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int evaluations = 0;
  bool converged = false;
};

using Integrand = std::function<double(double)>;

/// Globally adaptive 21-point Gauss-Kronrod integration over [a, b].
///
/// The panel with the largest error estimate is bisected until the summed
/// estimate drops below max(abs_tol, rel_tol * |value|) or the subdivision
/// budget is spent.  Either limit may be infinite; half-lines are mapped onto
/// [0, 1) by x = a + t / (1 - t).  Interior `breakpoints` seed the initial
/// partition and should sit at known kinks or steep transitions.
QuadratureResult integrate_adaptive(const Integrand& f, double a, double b,
                                    const QuadratureOptions& options = {},
                                    std::span<const double> breakpoints = {});

/// As integrate_adaptive, but throws ConvergenceError when the tolerance is missed.
double integrate(const Integrand& f, double a, double b, const QuadratureOptions& options = {},
                 std::span<const double> breakpoints = {});

/// log of the integral of exp(g) over (-inf, upper].
///
/// g must be concave with g'' <= -1 (a Gaussian log-weight plus any concave
/// term), which bounds the mass to a window of half-width ~9.5 around the
/// mode.  Works in shifted log space, so the result keeps full relative
/// accuracy when the integral under- or overflows a double.
double log_integrate_log_concave(const Integrand& g, double upper);

}  // namespace bmcopula
