#include "pint/roots.hpp"

#include <algorithm>
#include <cmath>

#include "pint/errors.hpp"

namespace pint {

namespace {

bool opposite(double a, double b) { return (a < 0.0 && b > 0.0) || (a > 0.0 && b < 0.0); }

// Root of p in [a, b] given p(a), p(b) of opposite sign.
double polish(const Polynomial& p, const Polynomial& dp, double a, double b, double tol,
              int max_newton) {
  double fa = p(a);
  double x = 0.5 * (a + b);
  for (int it = 0; it < max_newton; ++it) {
    const double fx = p(x);
    if (fx == 0.0) return x;
    if (opposite(fa, fx)) {
      b = x;
    } else {
      a = x;
      fa = fx;
    }
    const double d = dp(x);
    double next = (d != 0.0) ? x - fx / d : 0.5 * (a + b);
    if (!(next > a && next < b)) next = 0.5 * (a + b);
    if (std::abs(next - x) < tol) return next;
    x = next;
  }
  // Newton stalled; the bracket is still valid so plain bisection finishes.
  for (int it = 0; it < 2000 && b - a >= tol; ++it) {
    const double m = 0.5 * (a + b);
    const double fm = p(m);
    if (fm == 0.0) return m;
    if (opposite(fa, fm)) {
      b = m;
    } else {
      a = m;
      fa = fm;
    }
  }
  if (!(b - a < tol) && std::nextafter(a, b) != b) {
    throw ToleranceNotMet("root bracket did not shrink below tolerance");
  }
  return 0.5 * (a + b);
}

}  // namespace

std::vector<double> real_roots_in(const Polynomial& p, double lo, double hi, double tol,
                                  const RootOptions& options) {
  if (!(lo < hi)) throw DomainError("real_roots_in requires lo < hi");
  if (p.is_zero()) throw DomainError("real_roots_in on the zero polynomial");
  if (options.grid_points < 2) throw DomainError("root grid needs at least two points");

  const Polynomial dp = p.derivative();
  const Polynomial ddp = dp.derivative();
  const double residual_tol = tol * std::max(1.0, p.max_abs_coeff());
  const int n = options.grid_points;
  const double step = (hi - lo) / (n - 1);

  std::vector<double> xs(static_cast<std::size_t>(n));
  std::vector<double> fs(xs.size());
  std::vector<double> ds(xs.size());
  for (int i = 0; i < n; ++i) {
    xs[i] = (i == n - 1) ? hi : lo + i * step;
    fs[i] = p(xs[i]);
    ds[i] = dp(xs[i]);
  }

  std::vector<double> roots;
  for (int i = 0; i < n; ++i) {
    if (fs[i] == 0.0) roots.push_back(xs[i]);
  }
  for (int i = 0; i + 1 < n; ++i) {
    if (opposite(fs[i], fs[i + 1])) {
      roots.push_back(polish(p, dp, xs[i], xs[i + 1], tol, options.max_newton_iterations));
    } else if (!dp.is_zero() && opposite(ds[i], ds[i + 1])) {
      // p keeps its sign but turns around: a touching (even-multiplicity)
      // root if the extremum sits on zero.
      const double e = polish(dp, ddp, xs[i], xs[i + 1], tol, options.max_newton_iterations);
      if (std::abs(p(e)) <= residual_tol) roots.push_back(e);
    }
  }

  std::sort(roots.begin(), roots.end());
  std::vector<double> unique;
  for (double r : roots) {
    if (unique.empty() || std::abs(r - unique.back()) > 10.0 * tol) unique.push_back(r);
  }
  return unique;
}

}  // namespace pint
