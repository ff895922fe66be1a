#include "pint/fem1d.hpp"

#include <numbers>

namespace pint {

const char* to_string(Boundary bc) noexcept {
  return bc == Boundary::Dirichlet ? "dirichlet" : "neumann";
}

Mesh1D::Mesh1D(int intervals, Boundary bc)
    : intervals_(intervals), h_(std::numbers::pi / intervals), bc_(bc) {
  if (intervals < 3) throw MeshTooCoarse("mesh needs at least 3 intervals, got " + std::to_string(intervals));
}

FemSystem assemble(const Mesh1D& mesh, bool lumped) {
  const auto n = static_cast<std::size_t>(mesh.dofs());
  const double h = mesh.h();
  FemSystem sys{mesh, {}, {}, lumped};

  auto& m = sys.mass;
  m.diag.assign(n, lumped ? h : 4.0 * h / 6.0);
  m.sub.assign(n - 1, lumped ? 0.0 : h / 6.0);
  m.sup = m.sub;

  auto& k = sys.stiffness;
  k.diag.assign(n, 2.0 / h);
  k.sub.assign(n - 1, -1.0 / h);
  k.sup = k.sub;

  if (mesh.bc() == Boundary::Neumann) {
    m.diag.front() = m.diag.back() = lumped ? h / 2.0 : h / 3.0;
    k.diag.front() = k.diag.back() = 1.0 / h;
  }
  return sys;
}

Vector interpolate(const Mesh1D& mesh, const std::function<double(double)>& f) {
  Vector v(static_cast<std::size_t>(mesh.dofs()));
  for (int i = 0; i < mesh.dofs(); ++i) v[static_cast<std::size_t>(i)] = f(mesh.x(i));
  return v;
}

namespace {

// Integral of the hat centred at xi over [lo, hi].
double hat_integral(double xi, double h, double lo, double hi) {
  double total = 0.0;
  // Rising half on [xi - h, xi]: (x - xi + h)/h.
  {
    const double a = std::max(lo, xi - h);
    const double b = std::min(hi, xi);
    if (b > a) total += ((b - xi + h) * (b - xi + h) - (a - xi + h) * (a - xi + h)) / (2.0 * h);
  }
  // Falling half on [xi, xi + h]: (xi + h - x)/h.
  {
    const double a = std::max(lo, xi);
    const double b = std::min(hi, xi + h);
    if (b > a) total += ((xi + h - a) * (xi + h - a) - (xi + h - b) * (xi + h - b)) / (2.0 * h);
  }
  return total;
}

}  // namespace

Vector indicator_load(const Mesh1D& mesh, double a, double b) {
  const double lo = std::max(a, 0.0);
  const double hi = std::min(b, std::numbers::pi);
  Vector load(static_cast<std::size_t>(mesh.dofs()), 0.0);
  if (!(hi > lo)) return load;
  for (int i = 0; i < mesh.dofs(); ++i) {
    load[static_cast<std::size_t>(i)] = hat_integral(mesh.x(i), mesh.h(), lo, hi);
  }
  return load;
}

Vector project_indicator(const FemSystem& sys, double a, double b) {
  return solve_tri(sys.mass, indicator_load(sys.mesh, a, b));
}

double mass_norm(const FemSystem& sys, const Vector& v) {
  const Vector mv = sys.mass.apply(v);
  double acc = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) acc += v[i] * mv[i];
  return std::sqrt(std::max(acc, 0.0));
}

double mass_distance(const FemSystem& sys, const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw DomainError("state sizes differ");
  Vector d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  return mass_norm(sys, d);
}

double discrete_eigenvalue(const Mesh1D& mesh, int k, bool lumped) {
  const int k_min = mesh.bc() == Boundary::Dirichlet ? 1 : 0;
  if (k < k_min || k >= mesh.intervals()) throw DomainError("eigenmode index out of range");
  const double h = mesh.h();
  const double c = std::cos(k * h);
  return lumped ? 2.0 * (1.0 - c) / (h * h) : 6.0 * (1.0 - c) / (h * h * (2.0 + c));
}

Vector discrete_eigenvector(const Mesh1D& mesh, int k) {
  const int k_min = mesh.bc() == Boundary::Dirichlet ? 1 : 0;
  if (k < k_min || k >= mesh.intervals()) throw DomainError("eigenmode index out of range");
  if (mesh.bc() == Boundary::Dirichlet) {
    return interpolate(mesh, [k](double x) { return std::sin(k * x); });
  }
  return interpolate(mesh, [k](double x) { return std::cos(k * x); });
}

}  // namespace pint
