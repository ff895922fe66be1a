#pragma once

#include <vector>

#include "pint/polynomial.hpp"

namespace pint {

struct RootOptions {
  int grid_points = 4096;
  int max_newton_iterations = 100;
};

/// Real roots of p in [lo, hi], ascending. Simple roots are bracketed by sign
/// changes on a uniform grid and polished by safeguarded Newton (bisection
/// whenever the Newton step leaves the bracket). Even-multiplicity roots are
/// found through sign changes of p' when |p| there is within tolerance, so
/// they are only detected up to grid resolution.
///
/// Every returned root rho satisfies |p(rho)| <= tol * max(1, max|coeffs|)
/// or lies within tol of an exact sign change.
std::vector<double> real_roots_in(const Polynomial& p, double lo, double hi, double tol,
                                  const RootOptions& options = {});

}  // namespace pint
