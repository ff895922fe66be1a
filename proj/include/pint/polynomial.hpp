#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <vector>

namespace pint {

inline constexpr int kDefaultDegreeCap = 64;

/// Real-coefficient polynomial stored in ascending order: coeffs()[k]
/// multiplies x^k. Always canonical, i.e. the highest stored coefficient is
/// nonzero; the zero polynomial has no coefficients and degree -1.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<double> coeffs);
  Polynomial(std::initializer_list<double> coeffs);

  static Polynomial constant(double c);
  static Polynomial monomial(int k, double c = 1.0);

  const std::vector<double>& coeffs() const noexcept { return coeffs_; }
  bool is_zero() const noexcept { return coeffs_.empty(); }
  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  double leading() const noexcept { return coeffs_.empty() ? 0.0 : coeffs_.back(); }
  double coeff(int k) const noexcept;
  double max_abs_coeff() const noexcept;

  /// Horner evaluation over any field-like scalar (double, complex,
  /// multiprecision floats).
  template <class T>
  T eval(const T& x) const {
    T acc = T(0);
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + T(*it);
    return acc;
  }
  double operator()(double x) const { return eval(x); }
  std::complex<double> operator()(std::complex<double> z) const { return eval(z); }

  Polynomial derivative() const;

  /// Drops highest-degree coefficients whose magnitude is at most
  /// rel_tol * max_abs_coeff(). Used to clean rounding residue from
  /// cancellations that are exact in real arithmetic.
  Polynomial trimmed(double rel_tol) const;

  /// x -> p(a*x + b).
  Polynomial compose_affine(double a, double b, int degree_cap = kDefaultDegreeCap) const;

  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  void canonicalize();

  std::vector<double> coeffs_;
};

Polynomial add(const Polynomial& p, const Polynomial& q);
Polynomial sub(const Polynomial& p, const Polynomial& q);
Polynomial scale(const Polynomial& p, double s);
Polynomial mul(const Polynomial& p, const Polynomial& q, int degree_cap = kDefaultDegreeCap);
Polynomial pow(const Polynomial& p, int n, int degree_cap = kDefaultDegreeCap);

inline Polynomial operator+(const Polynomial& p, const Polynomial& q) { return add(p, q); }
inline Polynomial operator-(const Polynomial& p, const Polynomial& q) { return sub(p, q); }
inline Polynomial operator*(const Polynomial& p, const Polynomial& q) { return mul(p, q); }
inline Polynomial operator*(double s, const Polynomial& p) { return scale(p, s); }

}  // namespace pint
