#pragma once

#include <cmath>
#include <complex>

#include "pint/errors.hpp"
#include "pint/polynomial.hpp"

namespace pint {

/// |den(z)| at or below this is treated as a pole.
inline constexpr double kPoleThreshold = 1e-300;

/// Ratio num/den of real polynomials, not reduced to lowest terms.
/// Evaluation fails only at actual zeros of den.
class RationalFn {
 public:
  RationalFn() : num_(), den_(Polynomial::constant(1.0)) {}
  RationalFn(Polynomial num, Polynomial den);
  explicit RationalFn(Polynomial num) : RationalFn(std::move(num), Polynomial::constant(1.0)) {}

  const Polynomial& num() const noexcept { return num_; }
  const Polynomial& den() const noexcept { return den_; }

  template <class T>
  T eval(const T& z) const {
    const T d = den_.eval(z);
    using std::abs;
    if (!(abs(d) > kPoleThreshold)) throw PoleError("rational function evaluated at a pole");
    return num_.eval(z) / d;
  }
  double operator()(double x) const { return eval(x); }
  std::complex<double> operator()(std::complex<double> z) const { return eval(z); }

  /// Limit as |z| -> infinity along the real axis: 0 when deg num < deg den,
  /// the leading-coefficient ratio when degrees agree, signed infinity
  /// (sign taken for z -> +infinity) otherwise.
  double value_at_infinity() const;

  /// z -> f(a*z + b).
  RationalFn compose_affine(double a, double b, int degree_cap = kDefaultDegreeCap) const;

  /// Drops rounding residue from both polynomials, see Polynomial::trimmed.
  RationalFn trimmed(double rel_tol) const;

 private:
  Polynomial num_;
  Polynomial den_;
};

RationalFn add(const RationalFn& f, const RationalFn& g, int degree_cap = kDefaultDegreeCap);
RationalFn sub(const RationalFn& f, const RationalFn& g, int degree_cap = kDefaultDegreeCap);
RationalFn mul(const RationalFn& f, const RationalFn& g, int degree_cap = kDefaultDegreeCap);
RationalFn scale(const RationalFn& f, double s);

inline RationalFn operator+(const RationalFn& f, const RationalFn& g) { return add(f, g); }
inline RationalFn operator-(const RationalFn& f, const RationalFn& g) { return sub(f, g); }
inline RationalFn operator*(const RationalFn& f, const RationalFn& g) { return mul(f, g); }

}  // namespace pint
