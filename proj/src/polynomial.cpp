#include "pint/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pint/errors.hpp"

namespace pint {

namespace {

void check_cap(int degree, int cap) {
  if (degree > cap) {
    throw DegreeOverflow("polynomial degree " + std::to_string(degree) + " exceeds cap " +
                         std::to_string(cap));
  }
}

}  // namespace

Polynomial::Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) { canonicalize(); }

Polynomial::Polynomial(std::initializer_list<double> coeffs) : coeffs_(coeffs) { canonicalize(); }

Polynomial Polynomial::constant(double c) { return Polynomial(std::vector<double>{c}); }

Polynomial Polynomial::monomial(int k, double c) {
  std::vector<double> v(static_cast<std::size_t>(k) + 1, 0.0);
  v.back() = c;
  return Polynomial(std::move(v));
}

void Polynomial::canonicalize() {
  while (!coeffs_.empty() && coeffs_.back() == 0.0) coeffs_.pop_back();
}

double Polynomial::coeff(int k) const noexcept {
  return (k >= 0 && k < static_cast<int>(coeffs_.size())) ? coeffs_[static_cast<std::size_t>(k)]
                                                          : 0.0;
}

double Polynomial::max_abs_coeff() const noexcept {
  double m = 0.0;
  for (double c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

Polynomial Polynomial::derivative() const {
  if (coeffs_.size() <= 1) return {};
  std::vector<double> d(coeffs_.size() - 1);
  for (std::size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = static_cast<double>(k) * coeffs_[k];
  return Polynomial(std::move(d));
}

Polynomial Polynomial::trimmed(double rel_tol) const {
  const double cut = rel_tol * max_abs_coeff();
  std::vector<double> c = coeffs_;
  while (!c.empty() && std::abs(c.back()) <= cut) c.pop_back();
  return Polynomial(std::move(c));
}

Polynomial Polynomial::compose_affine(double a, double b, int degree_cap) const {
  // Horner in polynomial arithmetic: acc = acc * (a x + b) + c_k.
  const Polynomial lin{b, a};
  Polynomial acc;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    acc = add(mul(acc, lin, degree_cap), Polynomial::constant(*it));
  }
  return acc;
}

Polynomial add(const Polynomial& p, const Polynomial& q) {
  const auto& a = p.coeffs();
  const auto& b = q.coeffs();
  std::vector<double> c(std::max(a.size(), b.size()), 0.0);
  for (std::size_t k = 0; k < a.size(); ++k) c[k] += a[k];
  for (std::size_t k = 0; k < b.size(); ++k) c[k] += b[k];
  return Polynomial(std::move(c));
}

Polynomial sub(const Polynomial& p, const Polynomial& q) { return add(p, scale(q, -1.0)); }

Polynomial scale(const Polynomial& p, double s) {
  std::vector<double> c = p.coeffs();
  for (double& x : c) x *= s;
  return Polynomial(std::move(c));
}

Polynomial mul(const Polynomial& p, const Polynomial& q, int degree_cap) {
  if (p.is_zero() || q.is_zero()) return {};
  check_cap(p.degree() + q.degree(), degree_cap);
  const auto& a = p.coeffs();
  const auto& b = q.coeffs();
  std::vector<double> c(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  return Polynomial(std::move(c));
}

Polynomial pow(const Polynomial& p, int n, int degree_cap) {
  if (n < 0) throw DomainError("negative polynomial power");
  if (!p.is_zero()) check_cap(p.degree() * n, degree_cap);
  Polynomial result = Polynomial::constant(1.0);
  for (int i = 0; i < n; ++i) result = mul(result, p, degree_cap);
  return result;
}

}  // namespace pint
