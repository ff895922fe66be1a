#include "pint/rational.hpp"

#include <limits>

namespace pint {

RationalFn::RationalFn(Polynomial num, Polynomial den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw DomainError("rational function with zero denominator");
}

double RationalFn::value_at_infinity() const {
  if (num_.is_zero() || num_.degree() < den_.degree()) return 0.0;
  const double ratio = num_.leading() / den_.leading();
  if (num_.degree() == den_.degree()) return ratio;
  return std::copysign(std::numeric_limits<double>::infinity(), ratio);
}

RationalFn RationalFn::compose_affine(double a, double b, int degree_cap) const {
  return {num_.compose_affine(a, b, degree_cap), den_.compose_affine(a, b, degree_cap)};
}

RationalFn RationalFn::trimmed(double rel_tol) const {
  return {num_.trimmed(rel_tol), den_.trimmed(rel_tol)};
}

RationalFn add(const RationalFn& f, const RationalFn& g, int degree_cap) {
  if (f.den() == g.den()) return {add(f.num(), g.num()), f.den()};
  return {add(mul(f.num(), g.den(), degree_cap), mul(g.num(), f.den(), degree_cap)),
          mul(f.den(), g.den(), degree_cap)};
}

RationalFn sub(const RationalFn& f, const RationalFn& g, int degree_cap) {
  return add(f, scale(g, -1.0), degree_cap);
}

RationalFn mul(const RationalFn& f, const RationalFn& g, int degree_cap) {
  return {mul(f.num(), g.num(), degree_cap), mul(f.den(), g.den(), degree_cap)};
}

RationalFn scale(const RationalFn& f, double s) { return {scale(f.num(), s), f.den()}; }

}  // namespace pint
