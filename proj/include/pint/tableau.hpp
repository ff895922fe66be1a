#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pint/rational.hpp"

namespace pint {

/// Coefficients (A, b, c) of an m-stage Runge-Kutta method.
class ButcherTableau {
 public:
  /// `a` is row-major m x m. Throws DomainError if the shapes disagree, the
  /// row sums of A differ from c by more than 1e-12, or two c entries
  /// coincide.
  ButcherTableau(int stages, std::vector<double> a, std::vector<double> b, std::vector<double> c);

  int stages() const noexcept { return stages_; }
  double a(int i, int j) const { return a_[static_cast<std::size_t>(i * stages_ + j)]; }
  const std::vector<double>& a() const noexcept { return a_; }
  const std::vector<double>& b() const noexcept { return b_; }
  const std::vector<double>& c() const noexcept { return c_; }

 private:
  int stages_;
  std::vector<double> a_;
  std::vector<double> b_;
  std::vector<double> c_;
};

/// One (c_i, p_i) pair of the forcing quadrature.
struct QuadratureWeight {
  double c;
  RationalFn p;
};

struct StabilityData {
  RationalFn r;
  std::vector<QuadratureWeight> weights;
};

/// r(z) = 1 + z b^T (I - zA)^{-1} 1 and p_i(z) = (b^T (I - zA)^{-1})_i, all
/// sharing the denominator det(I - zA). Computed by cofactor expansion of
/// the polynomial matrix I - zA, so no sampling or interpolation is involved.
StabilityData derive_stability(const ButcherTableau& tableau);

/// A named single-step integrator, described both as a tableau (when it has
/// one) and by its rational stability data.
struct SchemeSpec {
  std::string name;
  std::optional<ButcherTableau> tableau;
  RationalFn r;
  std::vector<QuadratureWeight> weights;
  int declared_order = 0;
  int strictly_accurate_order = 0;
};

/// Names accepted by builtin(), in catalog order.
const std::vector<std::string>& builtin_names();

/// backward-euler, lobatto3c-2, lobatto3c-3, lobatto3c-4 or calahan.
/// Throws UnknownScheme otherwise.
SchemeSpec builtin(std::string_view name);

/// Closed-form stability function of a builtin, written independently of its
/// tableau (as a function of z, i.e. already composed with s = -z). Used to
/// cross-check derive_stability.
RationalFn explicit_stability(std::string_view name);

/// Alternate closed forms of the Calahan forcing weights p_1, p_2 (as
/// functions of z). They disagree with the tableau-derived weights; they are
/// kept only so reports can show the discrepancy.
std::vector<QuadratureWeight> calahan_alternate_weights();

}  // namespace pint
