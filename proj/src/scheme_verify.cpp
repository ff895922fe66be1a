#include "pint/scheme_verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace pint {

namespace {

using Real = boost::multiprecision::cpp_bin_float_50;

constexpr double kRFloor = 1e-15;
constexpr double kQuadratureFloor = 1e-15;
constexpr int kFitPoints = 5;
constexpr int kMinFitPoints = 3;
constexpr int kFirstDyadic = 2;
constexpr int kLastDyadic = 40;

struct Sample {
  double log_lambda;
  double log_defect;
};

double ls_slope(const std::vector<Sample>& pts) {
  double mx = 0.0, my = 0.0;
  for (const auto& p : pts) {
    mx += p.log_lambda;
    my += p.log_defect;
  }
  mx /= static_cast<double>(pts.size());
  my /= static_cast<double>(pts.size());
  double sxy = 0.0, sxx = 0.0;
  for (const auto& p : pts) {
    sxy += (p.log_lambda - mx) * (p.log_defect - my);
    sxx += (p.log_lambda - mx) * (p.log_lambda - mx);
  }
  return sxy / sxx;
}

// Fits log|defect| against log(lambda) over the smallest lambdas whose
// defect clears `floor(lambda)`. Returns NaN when too few points survive.
template <class Defect, class Floor>
double fitted_slope(Defect defect, Floor floor, int* used = nullptr) {
  std::vector<Sample> kept;
  for (int j = kFirstDyadic; j <= kLastDyadic; ++j) {
    const double lambda = std::ldexp(1.0, -j);
    const double d = static_cast<double>(abs(defect(Real(lambda))));
    if (d > floor(lambda)) kept.push_back({std::log(lambda), std::log(d)});
  }
  if (kept.size() > static_cast<std::size_t>(kFitPoints)) {
    kept.erase(kept.begin(), kept.end() - kFitPoints);
  }
  if (used) *used = static_cast<int>(kept.size());
  if (kept.size() < static_cast<std::size_t>(kMinFitPoints)) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  return ls_slope(kept);
}

// j!/(-l)^{j+1} (exp(-l) - sum_{k<=j} (-l)^k/k!) as its convergent series
// sum_{k>j} j! (-l)^{k-j-1} / k!, which avoids the cancellation.
Real exp_remainder(const Real& lambda, int j) {
  Real term = Real(1) / Real(j + 1);  // k = j+1
  Real sum = term;
  for (int k = j + 2; k < j + 200; ++k) {
    term *= -lambda / Real(k);
    sum += term;
    if (abs(term) < Real(1e-45) * abs(sum)) break;
  }
  return sum;
}

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

// Compares num_a/den_a and num_b/den_b by cross multiplication.
bool rational_identity(const RationalFn& a, const RationalFn& b, double rel_tol) {
  const Polynomial lhs = mul(a.num(), b.den());
  const Polynomial rhs = mul(b.num(), a.den());
  const double scale = std::max({lhs.max_abs_coeff(), rhs.max_abs_coeff(), 1e-300});
  return sub(lhs, rhs).max_abs_coeff() <= rel_tol * scale;
}

}  // namespace

P1Report verify_p1(const SchemeSpec& scheme, int sample_count) {
  if (sample_count < 100) throw DomainError("verify_p1 needs at least 100 samples");
  P1Report rep;
  rep.r_below_one = true;
  rep.weights_bounded = true;
  rep.weight_degrees_ok = true;
  bool witness_set = false;

  for (int k = 0; k < sample_count; ++k) {
    const double lambda = std::pow(10.0, -6.0 + 14.0 * k / (sample_count - 1));
    double r_abs = 0.0;
    try {
      r_abs = std::abs(scheme.r(-lambda));
    } catch (const PoleError&) {
      r_abs = std::numeric_limits<double>::infinity();
    }
    if (r_abs > rep.max_abs_r) {
      rep.max_abs_r = r_abs;
      if (!witness_set) rep.witness_lambda = lambda;
    }
    if (!(r_abs < 1.0) && rep.r_below_one) {
      rep.r_below_one = false;
      rep.witness_lambda = lambda;
      witness_set = true;
    }
    for (const auto& w : scheme.weights) {
      double p_abs = 0.0;
      try {
        p_abs = std::abs(w.p(-lambda));
      } catch (const PoleError&) {
        p_abs = std::numeric_limits<double>::infinity();
      }
      rep.max_abs_weight = std::max(rep.max_abs_weight, p_abs);
      if (!(p_abs <= kWeightBound) && rep.weights_bounded) {
        rep.weights_bounded = false;
        if (!witness_set) {
          rep.witness_lambda = lambda;
          witness_set = true;
        }
      }
    }
  }
  if (!(std::abs(scheme.r.value_at_infinity()) <= 1.0)) rep.r_below_one = false;
  for (const auto& w : scheme.weights) {
    if (!w.p.num().is_zero() && w.p.num().degree() >= w.p.den().degree()) {
      rep.weight_degrees_ok = false;
    }
  }
  rep.pass = rep.r_below_one && rep.weights_bounded && rep.weight_degrees_ok;
  return rep;
}

P3Report verify_p3(const SchemeSpec& scheme) {
  P3Report rep;
  rep.r_at_infinity = scheme.r.value_at_infinity();
  rep.pass = std::abs(rep.r_at_infinity) < 1.0;
  rep.l_stable = std::abs(rep.r_at_infinity) < 1e-12;
  return rep;
}

OrderReport measure_order(const SchemeSpec& scheme) {
  OrderReport rep;
  auto r_defect = [&](const Real& lambda) { return scheme.r.eval(Real(-lambda)) - exp(-lambda); };
  rep.slope = fitted_slope(r_defect, [](double l) { return kRFloor * l; }, &rep.points_used);
  if (std::isnan(rep.slope)) return rep;
  const double nearest = std::round(rep.slope);
  if (std::abs(rep.slope - nearest) > 0.2) return rep;
  rep.measured_order = static_cast<int>(nearest) - 1;

  int quad = rep.measured_order;
  for (int j = 0; j <= rep.measured_order; ++j) {
    auto q_defect = [&](const Real& lambda) {
      Real sum = 0;
      for (const auto& w : scheme.weights) {
        sum += pow(Real(w.c), j) * w.p.eval(Real(-lambda));
      }
      return sum - exp_remainder(lambda, j);
    };
    const double s = fitted_slope(q_defect, [](double) { return kQuadratureFloor; });
    rep.quadrature_slopes.push_back(s);
    // A defect that never clears the floor decays faster than we can see.
    const int decay = std::isnan(s) ? rep.measured_order : static_cast<int>(std::round(s));
    quad = std::min(quad, decay + j);
  }
  rep.quadrature_order = quad;
  return rep;
}

int verify_order(const SchemeSpec& scheme) {
  const OrderReport rep = measure_order(scheme);
  if (rep.measured_order != scheme.declared_order) {
    throw OrderMismatch("scheme '" + scheme.name + "' measured order " +
                        std::to_string(rep.measured_order) + " (slope " +
                        std::to_string(rep.slope) + "), declared " +
                        std::to_string(scheme.declared_order));
  }
  return rep.measured_order;
}

int verify_strict_accuracy(const SchemeSpec& scheme) {
  // sum_i c_i^j p_i(z) == j! (r(z) - T_j(z)) / z^{j+1}, T_j the degree-j
  // Taylor polynomial of e^z (the identity written in z = -lambda).
  constexpr int kMaxIndex = 16;
  int q = 0;
  for (int j = 0; j < kMaxIndex; ++j) {
    RationalFn lhs(Polynomial{}, scheme.weights.empty() ? Polynomial::constant(1.0)
                                                         : scheme.weights.front().p.den());
    for (const auto& w : scheme.weights) lhs = add(lhs, scale(w.p, std::pow(w.c, j)));

    std::vector<double> taylor(static_cast<std::size_t>(j) + 1);
    for (int l = 0; l <= j; ++l) taylor[static_cast<std::size_t>(l)] = 1.0 / factorial(l);
    const Polynomial rem =
        sub(scheme.r.num(), mul(Polynomial(std::move(taylor)), scheme.r.den()));
    const RationalFn rhs(scale(rem, factorial(j)),
                         mul(Polynomial::monomial(j + 1), scheme.r.den()));

    if (!rational_identity(lhs, rhs, 1e-10)) break;
    q = j + 1;
  }
  return q;
}

double max_weight_deviation(const std::vector<QuadratureWeight>& a,
                            const std::vector<QuadratureWeight>& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::abs(a[i].c - b[i].c) > 1e-14) return std::numeric_limits<double>::infinity();
    for (int k = 0; k < 200; ++k) {
      const double lambda = std::pow(10.0, -4.0 + 8.0 * k / 199.0);
      const double x = a[i].p(-lambda);
      const double y = b[i].p(-lambda);
      worst = std::max(worst, std::abs(x - y) / std::max({std::abs(x), std::abs(y), 1e-300}));
    }
  }
  return worst;
}

}  // namespace pint
