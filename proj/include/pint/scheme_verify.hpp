#pragma once

#include <string>
#include <vector>

#include "pint/tableau.hpp"

namespace pint {

/// Boundedness on the negative real axis: |r(-lambda)| < 1, bounded
/// |p_i(-lambda)|, and deg num(p_i) < deg den(p_i).
struct P1Report {
  bool pass = false;
  bool r_below_one = false;
  bool weights_bounded = false;
  bool weight_degrees_ok = false;
  double max_abs_r = 0.0;
  double max_abs_weight = 0.0;
  /// Where the first violation was seen (or where max |r| was attained).
  double witness_lambda = 0.0;
};

/// Sup bound applied to |p_i(-lambda)|.
inline constexpr double kWeightBound = 1e6;

P1Report verify_p1(const SchemeSpec& scheme, int sample_count = 1000);

/// Strong stability |r(-inf)| < 1.
struct P3Report {
  bool pass = false;
  double r_at_infinity = 0.0;
  bool l_stable = false;
};

P3Report verify_p3(const SchemeSpec& scheme);

struct OrderReport {
  /// Accuracy order from the decay of |r(-lambda) - exp(-lambda)|, or -1 when
  /// the fitted slope is not within 0.2 of an integer.
  int measured_order = -1;
  double slope = 0.0;
  int points_used = 0;
  /// Slope of the forcing-quadrature defect for j = 0..measured_order.
  std::vector<double> quadrature_slopes;
  /// Largest q' <= measured_order for which every quadrature defect with
  /// j <= q' decays like lambda^(q'-j).
  int quadrature_order = -1;
};

/// Measures the accuracy order by least-squares slope fitting on dyadic
/// lambda = 2^-j. Evaluation is done in 50-digit arithmetic; points whose
/// defect falls under the rounding floor of the double coefficients
/// (1e-15 * lambda for r, 1e-15 for the quadrature) are discarded and the
/// five smallest surviving lambdas are fitted.
OrderReport measure_order(const SchemeSpec& scheme);

/// measure_order, throwing OrderMismatch unless it reproduces declared_order.
int verify_order(const SchemeSpec& scheme);

/// Largest q such that the strict-accuracy identity holds for all j < q,
/// checked as a cross-multiplied polynomial identity with coefficients
/// compared to 1e-10 relative.
int verify_strict_accuracy(const SchemeSpec& scheme);

/// Largest relative deviation between two weight sets on a log grid of
/// lambda in [1e-4, 1e4] (infinity when the sets have different sizes or c).
double max_weight_deviation(const std::vector<QuadratureWeight>& a,
                            const std::vector<QuadratureWeight>& b);

}  // namespace pint
