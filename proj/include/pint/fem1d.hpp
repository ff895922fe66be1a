#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "pint/errors.hpp"

namespace pint {

using Vector = std::vector<double>;
using ComplexVector = std::vector<std::complex<double>>;

enum class Boundary { Dirichlet, Neumann };

const char* to_string(Boundary bc) noexcept;

/// Uniform mesh of (0, pi) with M intervals.
class Mesh1D {
 public:
  /// Throws MeshTooCoarse for M < 3.
  Mesh1D(int intervals, Boundary bc);

  int intervals() const noexcept { return intervals_; }
  double h() const noexcept { return h_; }
  Boundary bc() const noexcept { return bc_; }
  /// M-1 unknowns for Dirichlet (interior nodes), M+1 for Neumann.
  int dofs() const noexcept { return bc_ == Boundary::Dirichlet ? intervals_ - 1 : intervals_ + 1; }
  /// Coordinate of unknown i.
  double x(int i) const noexcept { return (bc_ == Boundary::Dirichlet ? i + 1 : i) * h_; }

 private:
  int intervals_;
  double h_;
  Boundary bc_;
};

/// Banded n x n matrix: sub[i] = A(i+1, i), sup[i] = A(i, i+1).
template <class T>
struct Tridiagonal {
  std::vector<T> sub, diag, sup;

  int size() const noexcept { return static_cast<int>(diag.size()); }

  template <class U>
  auto apply(const std::vector<U>& v) const {
    using R = decltype(T{} * U{});
    const std::size_t n = diag.size();
    std::vector<R> out(n);
    for (std::size_t i = 0; i < n; ++i) {
      R acc = diag[i] * v[i];
      if (i > 0) acc += sub[i - 1] * v[i - 1];
      if (i + 1 < n) acc += sup[i] * v[i + 1];
      out[i] = acc;
    }
    return out;
  }
};

/// alpha * A + beta * B, bandwise.
template <class T>
Tridiagonal<T> combine(T alpha, const Tridiagonal<double>& a, T beta, const Tridiagonal<double>& b) {
  Tridiagonal<T> out;
  auto mix = [&](const std::vector<double>& x, const std::vector<double>& y, std::vector<T>& z) {
    z.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) z[i] = alpha * x[i] + beta * y[i];
  };
  mix(a.sub, b.sub, out.sub);
  mix(a.diag, b.diag, out.diag);
  mix(a.sup, b.sup, out.sup);
  return out;
}

/// Thomas factorization, no pivoting. Throws SingularMatrix when a pivot
/// drops below 1e-14 times the largest band entry.
template <class T>
class TridiagonalLU {
 public:
  explicit TridiagonalLU(const Tridiagonal<T>& m) : sub_(m.sub), sup_(m.sup), pivot_(m.diag) {
    const std::size_t n = pivot_.size();
    if (n == 0) throw DomainError("empty tridiagonal system");
    double scale = 0.0;
    for (const auto* band : {&m.sub, &m.diag, &m.sup})
      for (const T& v : *band) scale = std::max(scale, std::abs(v));
    const double floor = 1e-14 * scale;
    if (!(std::abs(pivot_[0]) > floor)) throw SingularMatrix("zero pivot at row 0");
    for (std::size_t i = 1; i < n; ++i) {
      sub_[i - 1] /= pivot_[i - 1];
      pivot_[i] -= sub_[i - 1] * sup_[i - 1];
      if (!(std::abs(pivot_[i]) > floor)) {
        throw SingularMatrix("zero pivot at row " + std::to_string(i));
      }
    }
  }

  int size() const noexcept { return static_cast<int>(pivot_.size()); }

  template <class U>
  auto solve(const std::vector<U>& rhs) const {
    using R = decltype(T{} * U{});
    const std::size_t n = pivot_.size();
    if (rhs.size() != n) throw DomainError("right-hand side has the wrong length");
    std::vector<R> x(rhs.begin(), rhs.end());
    for (std::size_t i = 1; i < n; ++i) x[i] -= sub_[i - 1] * x[i - 1];
    x[n - 1] /= pivot_[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) x[i] = (x[i] - sup_[i] * x[i + 1]) / pivot_[i];
    return x;
  }

 private:
  std::vector<T> sub_;  // multipliers after factorization
  std::vector<T> sup_;
  std::vector<T> pivot_;
};

/// One-shot factor-and-solve.
template <class T, class U>
auto solve_tri(const Tridiagonal<T>& m, const std::vector<U>& rhs) {
  return TridiagonalLU<T>(m).solve(rhs);
}

/// P1 Galerkin operators on a mesh: mass M and stiffness K for -d^2/dx^2.
struct FemSystem {
  Mesh1D mesh;
  Tridiagonal<double> mass;
  Tridiagonal<double> stiffness;
  bool lumped = false;
};

/// Consistent mass (h/6)[1 4 1] or, if `lumped`, row-sum lumping; stiffness
/// (1/h)[-1 2 -1]. Neumann boundary rows use h/3 (h/2 lumped) and 1/h.
FemSystem assemble(const Mesh1D& mesh, bool lumped = false);

/// Values of f at the unknowns' nodes.
Vector interpolate(const Mesh1D& mesh, const std::function<double(double)>& f);

/// Load vector b_i = integral over (a, b) of the hat function phi_i, exact.
Vector indicator_load(const Mesh1D& mesh, double a, double b);

/// L2 projection of the indicator of (a, b): M^{-1} indicator_load.
Vector project_indicator(const FemSystem& sys, double a, double b);

/// sqrt(v^T M v).
double mass_norm(const FemSystem& sys, const Vector& v);

/// Mass-norm distance between two states.
double mass_distance(const FemSystem& sys, const Vector& a, const Vector& b);

/// k-th generalized eigenvalue of (K, M): (6/h^2)(1 - cos kh)/(2 + cos kh),
/// or (2/h^2)(1 - cos kh) with lumped mass. Dirichlet k >= 1 with eigenvector
/// sin(k x_i); Neumann k >= 0 with cos(k x_i).
double discrete_eigenvalue(const Mesh1D& mesh, int k, bool lumped = false);
Vector discrete_eigenvector(const Mesh1D& mesh, int k);

struct StateVector {
  Vector values;
  double time = 0.0;
};

}  // namespace pint
