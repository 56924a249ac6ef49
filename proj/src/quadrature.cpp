#include "bmcopula/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include "bmcopula/errors.hpp"

namespace bmcopula {
namespace {

// 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK dqk21).
// Odd entries of kXgk are the Gauss abscissae; kXgk[10] is the centre.
constexpr double kXgk[11] = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};
constexpr double kWgk[11] = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077958109831074, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr double kWg[5] = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Panel {
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Panel& other) const { return error < other.error; }
};

Panel kronrod21(const Integrand& f, double a, double b) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  constexpr double uflow = std::numeric_limits<double>::min();
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double abs_half = std::abs(half);

  double fv1[10];
  double fv2[10];
  const double fc = f(centre);
  double resg = 0.0;
  double resk = kWgk[10] * fc;
  double resabs = std::abs(resk);
  for (int j = 0; j < 10; ++j) {
    const double dx = half * kXgk[j];
    const double f1 = f(centre - dx);
    const double f2 = f(centre + dx);
    fv1[j] = f1;
    fv2[j] = f2;
    resk += kWgk[j] * (f1 + f2);
    resabs += kWgk[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
  }
  const double reskh = 0.5 * resk;
  double resasc = kWgk[10] * std::abs(fc - reskh);
  for (int j = 0; j < 10; ++j) resasc += kWgk[j] * (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));

  Panel p{a, b, resk * half, std::abs((resk - resg) * half)};
  resabs *= abs_half;
  resasc *= abs_half;
  if (resasc != 0.0 && p.error != 0.0) p.error = resasc * std::min(1.0, std::pow(200.0 * p.error / resasc, 1.5));
  if (resabs > uflow / (50.0 * eps)) p.error = std::max(50.0 * eps * resabs, p.error);
  if (!std::isfinite(p.value)) p.error = std::numeric_limits<double>::infinity();
  return p;
}

QuadratureResult integrate_finite(const Integrand& f, std::vector<double> cuts, const QuadratureOptions& opt) {
  std::priority_queue<Panel> heap;
  QuadratureResult out;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (cuts[i + 1] > cuts[i]) {
      heap.push(kronrod21(f, cuts[i], cuts[i + 1]));
      out.evaluations += 21;
    }
  }

  std::vector<Panel> frozen;  // panels too narrow to split further
  auto totals = [&](double& value, double& error) {
    value = 0.0;
    error = 0.0;
    auto copy = heap;
    while (!copy.empty()) {
      value += copy.top().value;
      error += copy.top().error;
      copy.pop();
    }
    for (const auto& p : frozen) {
      value += p.value;
      error += p.error;
    }
  };

  double value = 0.0;
  double error = 0.0;
  totals(value, error);
  int splits = 0;
  while (!heap.empty()) {
    if (error <= std::max(opt.abs_tol, opt.rel_tol * std::abs(value))) break;
    if (splits >= opt.max_subdivisions) break;
    Panel worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b) || (worst.b - worst.a) < 1e-14 * std::max(1.0, std::abs(mid))) {
      frozen.push_back(worst);
      continue;
    }
    const Panel left = kronrod21(f, worst.a, mid);
    const Panel right = kronrod21(f, mid, worst.b);
    out.evaluations += 42;
    ++splits;
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    if (splits % 32 == 0) totals(value, error);
  }
  totals(value, error);
  out.value = value;
  out.error = error;
  out.converged = std::isfinite(value) && error <= std::max(opt.abs_tol, opt.rel_tol * std::abs(value));
  return out;
}

}  // namespace

QuadratureResult integrate_adaptive(const Integrand& f, double a, double b, const QuadratureOptions& options,
                                    std::span<const double> breakpoints) {
  require(!std::isnan(a) && !std::isnan(b), "integrate: NaN limit");
  if (a == b) return QuadratureResult{0.0, 0.0, 0, true};
  if (a > b) {
    auto r = integrate_adaptive(f, b, a, options, breakpoints);
    r.value = -r.value;
    return r;
  }

  const bool lo_inf = std::isinf(a);
  const bool hi_inf = std::isinf(b);
  if (lo_inf && hi_inf) {
    // Split at the median breakpoint (or 0) so each half is a single half-line.
    double split = 0.0;
    if (!breakpoints.empty()) split = breakpoints[breakpoints.size() / 2];
    std::vector<double> left_bp;
    std::vector<double> right_bp;
    for (double x : breakpoints) {
      if (x < split) left_bp.push_back(x);
      if (x > split) right_bp.push_back(x);
    }
    QuadratureOptions half = options;
    half.abs_tol *= 0.5;
    half.max_subdivisions = std::max(1, options.max_subdivisions / 2);
    auto l = integrate_adaptive(f, a, split, half, left_bp);
    auto r = integrate_adaptive(f, split, b, half, right_bp);
    return QuadratureResult{l.value + r.value, l.error + r.error, l.evaluations + r.evaluations,
                            l.converged && r.converged};
  }

  std::vector<double> cuts;
  if (!lo_inf && !hi_inf) {
    cuts.push_back(a);
    for (double x : breakpoints)
      if (x > a && x < b) cuts.push_back(x);
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    return integrate_finite(f, std::move(cuts), options);
  }

  // Half-line: x = a + t/(1-t) on [a, inf), or x = b - t/(1-t) on (-inf, b].
  const double anchor = lo_inf ? b : a;
  const double sign = lo_inf ? -1.0 : 1.0;
  Integrand mapped = [&f, anchor, sign](double t) {
    const double one_minus = 1.0 - t;
    if (one_minus <= 0.0) return 0.0;
    const double x = anchor + sign * t / one_minus;
    const double v = f(x);
    return v == 0.0 ? 0.0 : v / (one_minus * one_minus);
  };
  cuts.push_back(0.0);
  for (double x : breakpoints) {
    const double d = sign * (x - anchor);
    if (d > 0.0 && std::isfinite(d)) cuts.push_back(d / (1.0 + d));
  }
  cuts.push_back(1.0);
  std::sort(cuts.begin(), cuts.end());
  return integrate_finite(mapped, std::move(cuts), options);
}

double integrate(const Integrand& f, double a, double b, const QuadratureOptions& options,
                 std::span<const double> breakpoints) {
  const auto r = integrate_adaptive(f, a, b, options, breakpoints);
  if (!r.converged) throw ConvergenceError("adaptive quadrature did not converge", r.error);
  return r.value;
}

double log_integrate_log_concave(const Integrand& g, double upper) {
  constexpr double kDrop = 50.0;  // exp(-50) ~ 2e-22 relative truncation
  constexpr double kHalfWidth = 10.0;  // sqrt(2 * kDrop) under g'' <= -1

  const double b = upper;
  const double gb = g(b);
  const double h = 1e-6 * std::max(1.0, std::abs(b));
  double mode = b;
  double gmax = gb;

  const double gm0 = g(b - h);
  if (gm0 > gb) {
    // Bracket the maximum as a < m < c with g(m) >= g(a), g(c).
    double c = b;
    double m = b - h;
    double gm = gm0;
    double step = 0.5;
    double a = m - step;
    double ga = g(a);
    for (int it = 0; it < 80 && ga > gm; ++it) {
      c = m;
      m = a;
      gm = ga;
      step *= 2.0;
      a = m - step;
      ga = g(a);
    }
    // Golden section on [a, c].
    constexpr double kInvPhi = 0.6180339887498949;
    double x1 = c - kInvPhi * (c - a);
    double x2 = a + kInvPhi * (c - a);
    double g1 = g(x1);
    double g2 = g(x2);
    for (int it = 0; it < 40 && (c - a) > 1e-7 * std::max(1.0, std::abs(m)); ++it) {
      if (g1 < g2) {
        a = x1;
        x1 = x2;
        g1 = g2;
        x2 = a + kInvPhi * (c - a);
        g2 = g(x2);
      } else {
        c = x2;
        x2 = x1;
        g2 = g1;
        x1 = c - kInvPhi * (c - a);
        g1 = g(x1);
      }
    }
    mode = g1 > g2 ? x1 : x2;
    gmax = std::max(g1, g2);
    if (gm > gmax) {
      mode = m;
      gmax = gm;
    }
  } else {
    gmax = std::max(gb, gm0);
  }
  if (!std::isfinite(gmax)) return gmax;

  // Trim the window to where g has fallen by kDrop on each side.
  auto edge = [&](double inside, double outside) {
    if (g(outside) - gmax > -kDrop) return outside;
    for (int it = 0; it < 30; ++it) {
      const double mid = 0.5 * (inside + outside);
      if (g(mid) - gmax > -kDrop)
        inside = mid;
      else
        outside = mid;
    }
    return outside;
  };
  const double lo = edge(mode, mode - kHalfWidth);
  const double hi = mode < b ? edge(mode, std::min(b, mode + kHalfWidth)) : b;

  const Integrand shifted = [&g, gmax](double s) { return std::exp(g(s) - gmax); };
  QuadratureOptions opt;
  opt.abs_tol = 1e-300;
  opt.rel_tol = 1e-12;
  opt.max_subdivisions = 200;
  const double cut[1] = {mode};
  const auto r = integrate_adaptive(shifted, lo, hi, opt, std::span<const double>(cut, (mode > lo && mode < hi) ? 1 : 0));
  if (!r.converged && r.error > 1e-9 * std::abs(r.value))
    throw ConvergenceError("log-concave quadrature did not converge", r.error);
  return gmax + std::log(r.value);
}

}  // namespace bmcopula
