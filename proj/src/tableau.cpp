#include "pint/tableau.hpp"

#include <algorithm>
#include <cmath>

#include "pint/scheme_verify.hpp"

namespace pint {

namespace {

constexpr double kRowSumTol = 1e-12;
// Relative size below which derived coefficients are rounding residue of an
// exact cancellation (e.g. the vanishing leading terms of an L-stable r).
constexpr double kTrimTol = 1e-12;

using PolyMatrix = std::vector<std::vector<Polynomial>>;

PolyMatrix minor_of(const PolyMatrix& m, std::size_t row, std::size_t col) {
  PolyMatrix out;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (i == row) continue;
    std::vector<Polynomial> r;
    for (std::size_t j = 0; j < m.size(); ++j)
      if (j != col) r.push_back(m[i][j]);
    out.push_back(std::move(r));
  }
  return out;
}

Polynomial determinant(const PolyMatrix& m) {
  if (m.empty()) return Polynomial::constant(1.0);
  if (m.size() == 1) return m[0][0];
  Polynomial det;
  for (std::size_t j = 0; j < m.size(); ++j) {
    if (m[0][j].is_zero()) continue;
    Polynomial term = mul(m[0][j], determinant(minor_of(m, 0, j)));
    det = (j % 2 == 0) ? add(det, term) : sub(det, term);
  }
  return det;
}

RationalFn in_z(Polynomial num_s, Polynomial den_s) {
  // Build f(-s) = num/den in the variable s, then return z -> f(z).
  return RationalFn(std::move(num_s), std::move(den_s)).compose_affine(-1.0, 0.0);
}

ButcherTableau tableau_for(std::string_view name) {
  const double s3 = std::sqrt(3.0);
  const double s5 = std::sqrt(5.0);
  if (name == "backward-euler") return ButcherTableau(1, {1.0}, {1.0}, {1.0});
  if (name == "lobatto3c-2") {
    return ButcherTableau(2, {0.5, -0.5, 0.5, 0.5}, {0.5, 0.5}, {0.0, 1.0});
  }
  if (name == "lobatto3c-3") {
    return ButcherTableau(3,
                          {1.0 / 6, -1.0 / 3, 1.0 / 6,  //
                           1.0 / 6, 5.0 / 12, -1.0 / 12,  //
                           1.0 / 6, 2.0 / 3, 1.0 / 6},
                          {1.0 / 6, 2.0 / 3, 1.0 / 6}, {0.0, 0.5, 1.0});
  }
  if (name == "lobatto3c-4") {
    return ButcherTableau(4,
                          {1.0 / 12, -s5 / 12, s5 / 12, -1.0 / 12,  //
                           1.0 / 12, 0.25, (10 - 7 * s5) / 60, s5 / 60,  //
                           1.0 / 12, (10 + 7 * s5) / 60, 0.25, -s5 / 60,  //
                           1.0 / 12, 5.0 / 12, 5.0 / 12, 1.0 / 12},
                          {1.0 / 12, 5.0 / 12, 5.0 / 12, 1.0 / 12},
                          {0.0, 0.5 - s5 / 10, 0.5 + s5 / 10, 1.0});
  }
  if (name == "calahan") {
    return ButcherTableau(2,
                          {s3 / 6 + 2.0 / 3, -s3 / 6 - 1.0 / 3,  //
                           -s3 / 6 + 1.0 / 3, s3 / 6 + 1.0 / 3},
                          {0.5, 0.5}, {1.0 / 3, 2.0 / 3});
  }
  throw UnknownScheme("unknown scheme '" + std::string(name) + "'");
}

int declared_order_of(std::string_view name) {
  if (name == "backward-euler") return 1;
  if (name == "lobatto3c-2") return 2;
  if (name == "lobatto3c-3") return 4;
  if (name == "lobatto3c-4") return 6;
  return 3;  // calahan
}

double max_relative_deviation(const RationalFn& f, const RationalFn& g) {
  double worst = 0.0;
  constexpr int n = 1000;
  for (int k = 0; k < n; ++k) {
    const double s = std::pow(10.0, -4.0 + 8.0 * k / (n - 1));
    const double a = f(-s);
    const double b = g(-s);
    worst = std::max(worst, std::abs(a - b) / std::max(std::abs(b), 1e-300));
  }
  return worst;
}

}  // namespace

ButcherTableau::ButcherTableau(int stages, std::vector<double> a, std::vector<double> b,
                               std::vector<double> c)
    : stages_(stages), a_(std::move(a)), b_(std::move(b)), c_(std::move(c)) {
  const auto m = static_cast<std::size_t>(stages_);
  if (stages_ < 1 || a_.size() != m * m || b_.size() != m || c_.size() != m) {
    throw DomainError("Butcher tableau shapes do not match the stage count");
  }
  for (int i = 0; i < stages_; ++i) {
    double row = 0.0;
    for (int j = 0; j < stages_; ++j) row += this->a(i, j);
    if (std::abs(row - c_[static_cast<std::size_t>(i)]) > kRowSumTol) {
      throw DomainError("Butcher tableau row " + std::to_string(i) + " does not sum to c_i");
    }
    for (int j = 0; j < i; ++j) {
      if (c_[static_cast<std::size_t>(i)] == c_[static_cast<std::size_t>(j)]) {
        throw DomainError("Butcher tableau abscissae must be distinct");
      }
    }
  }
}

StabilityData derive_stability(const ButcherTableau& tableau) {
  const auto m = static_cast<std::size_t>(tableau.stages());
  PolyMatrix mat(m, std::vector<Polynomial>(m));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      mat[i][j] = Polynomial{i == j ? 1.0 : 0.0,
                             -tableau.a(static_cast<int>(i), static_cast<int>(j))};

  const Polynomial det = determinant(mat);
  if (det.is_zero()) throw SingularTableau("det(I - zA) vanishes identically");

  // (I - zA)^{-1} = adj / det with adj[k][i] = (-1)^{i+k} det(minor(i, k)).
  // Weight numerators: a_i = sum_k b_k adj[k][i].
  std::vector<Polynomial> weight_num(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t k = 0; k < m; ++k) {
      Polynomial cof = determinant(minor_of(mat, i, k));
      if ((i + k) % 2 == 1) cof = scale(cof, -1.0);
      weight_num[i] = add(weight_num[i], scale(cof, tableau.b()[k]));
    }
  }

  Polynomial sum_weights;
  for (const auto& w : weight_num) sum_weights = add(sum_weights, w);
  const Polynomial r_num = add(det, mul(Polynomial{0.0, 1.0}, sum_weights));

  StabilityData out{RationalFn(r_num, det).trimmed(kTrimTol), {}};
  for (std::size_t i = 0; i < m; ++i) {
    out.weights.push_back({tableau.c()[i], RationalFn(weight_num[i], det).trimmed(kTrimTol)});
  }
  return out;
}

const std::vector<std::string>& builtin_names() {
  static const std::vector<std::string> names{"backward-euler", "lobatto3c-2", "lobatto3c-3",
                                              "lobatto3c-4", "calahan"};
  return names;
}

RationalFn explicit_stability(std::string_view name) {
  if (name == "backward-euler") return in_z({1.0}, {1.0, 1.0});
  if (name == "lobatto3c-2") return in_z({2.0}, {2.0, 2.0, 1.0});
  if (name == "lobatto3c-3") return in_z({24.0, -6.0}, {24.0, 18.0, 6.0, 1.0});
  if (name == "lobatto3c-4") {
    return in_z({360.0, -120.0, 12.0}, {360.0, 240.0, 72.0, 12.0, 1.0});
  }
  if (name == "calahan") {
    // r(-s) = 1 - s/(1+bs) - (sqrt3/6) (s/(1+bs))^2.
    const double s3 = std::sqrt(3.0);
    const double b = 0.5 * (1.0 + s3 / 3.0);
    const RationalFn q(Polynomial{0.0, 1.0}, Polynomial{1.0, b});
    const RationalFn r_minus_s =
        sub(sub(RationalFn(Polynomial::constant(1.0)), q), scale(mul(q, q), s3 / 6.0));
    return r_minus_s.compose_affine(-1.0, 0.0);
  }
  throw UnknownScheme("unknown scheme '" + std::string(name) + "'");
}

std::vector<QuadratureWeight> calahan_alternate_weights() {
  const double s3 = std::sqrt(3.0);
  const double b = 0.5 * (1.0 + s3 / 3.0);
  const Polynomial den = pow(Polynomial{1.0, b}, 2);
  return {
      {1.0 / 3, in_z({0.5 + s3, s3 / 2}, den)},
      {2.0 / 3, in_z({0.5 - s3, 0.5 - s3 / 2}, den)},
  };
}

SchemeSpec builtin(std::string_view name) {
  ButcherTableau tableau = tableau_for(name);
  StabilityData data = derive_stability(tableau);

  const RationalFn closed_form = explicit_stability(name);
  if (max_relative_deviation(data.r, closed_form) > 1e-10) {
    throw Error("catalog inconsistency: tableau of '" + std::string(name) +
                "' does not reproduce its closed-form stability function");
  }

  SchemeSpec spec{std::string(name), std::move(tableau), std::move(data.r),
                  std::move(data.weights), declared_order_of(name), 0};
  spec.strictly_accurate_order = verify_strict_accuracy(spec);
  return spec;
}

}  // namespace pint
