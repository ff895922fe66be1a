#include "pint/propagators.hpp"

#include <algorithm>
#include <cmath>

namespace pint {

namespace {

using Complex = std::complex<double>;

template <class P>
std::shared_ptr<const P> borrow(const P& p) {
  return std::shared_ptr<const P>(std::shared_ptr<void>(), &p);
}

const ButcherTableau& require_tableau(const SchemeSpec& scheme) {
  if (!scheme.tableau) throw DomainError("scheme '" + scheme.name + "' has no Butcher tableau");
  return *scheme.tableau;
}

void check_step(double dt) {
  if (!(dt > 0.0)) throw DomainError("step size must be positive");
}

void check_size(const FemSystem& fem, const Vector& v) {
  if (v.size() != static_cast<std::size_t>(fem.mass.size())) {
    throw DomainError("state has " + std::to_string(v.size()) + " entries, system has " +
                      std::to_string(fem.mass.size()) + " unknowns");
  }
}

Vector nodal_forcing(const LinearProblem& p, double t) {
  if (!p.forcing) return Vector(static_cast<std::size_t>(p.fem.mesh.dofs()), 0.0);
  return interpolate(p.fem.mesh, [&](double x) { return p.forcing(x, t); });
}

double inf_norm(const Vector& v) {
  double n = 0.0;
  for (double x : v) n = std::max(n, std::abs(x));
  return n;
}

}  // namespace

Vector propagate(const Propagator& p, double t, const Vector& v, int steps) {
  Vector u = v;
  for (int s = 0; s < steps; ++s) u = p.advance(t + s * p.step_size(), u);
  return u;
}

// ---------------------------------------------------------------------------

BackwardEulerLinear::BackwardEulerLinear(std::shared_ptr<const LinearProblem> problem, double dT)
    : problem_(std::move(problem)),
      dT_((check_step(dT), dT)),
      lu_(combine(1.0, problem_->fem.mass, dT, problem_->fem.stiffness)) {}

Vector BackwardEulerLinear::advance(double t, const Vector& v) const {
  check_size(problem_->fem, v);
  Vector w = v;
  if (problem_->forcing) {
    const Vector f = nodal_forcing(*problem_, t);
    for (std::size_t i = 0; i < w.size(); ++i) w[i] += dT_ * f[i];
  }
  return lu_.solve(problem_->fem.mass.apply(w));
}

// ---------------------------------------------------------------------------

Vector rk_update(const FemSystem& fem, const TridiagonalLU<double>& mass_lu,
                 const std::vector<double>& b, double dt, const Vector& v, const Vector& stages,
                 const Vector& stage_forcing) {
  const std::size_t n = v.size();
  const std::size_t m = b.size();
  Vector weighted(n, 0.0);
  Vector out = v;
  for (std::size_t a = 0; a < n; ++a) {
    double f = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      weighted[a] += b[i] * stages[a * m + i];
      f += b[i] * stage_forcing[a * m + i];
    }
    out[a] += dt * f;
  }
  const Vector z = mass_lu.solve(fem.stiffness.apply(weighted));
  for (std::size_t a = 0; a < n; ++a) out[a] -= dt * z[a];
  return out;
}

ImplicitRKLinear::ImplicitRKLinear(std::shared_ptr<const LinearProblem> problem,
                                   const SchemeSpec& scheme, double dt, bool force_block_solver)
    : problem_(std::move(problem)),
      scheme_name_(scheme.name),
      tableau_(require_tableau(scheme)),
      dt_((check_step(dt), dt)),
      mass_lu_(problem_->fem.mass) {
  if (!force_block_solver) decomposition_ = diagonalize(tableau_);
  const auto& fem = problem_->fem;
  if (decomposition_) {
    for (const Complex& mu : decomposition_->eigenvalues) {
      stage_lu_.emplace_back(combine(Complex(1.0), fem.mass, dt_ * mu, fem.stiffness));
    }
  } else {
    block_lu_.emplace(kron_block_system(fem.mass, fem.stiffness, butcher_matrix(tableau_), dt_));
  }
}

Vector ImplicitRKLinear::advance(double t, const Vector& v) const {
  const auto& fem = problem_->fem;
  check_size(fem, v);
  const std::size_t n = v.size();
  const auto m = static_cast<std::size_t>(tableau_.stages());

  // Node-major nodal forcing F[a*m+i] = f(x_a, t + c_i dt) and its mass image.
  Vector forcing(n * m, 0.0);
  std::vector<Vector> mass_forcing(m, Vector(n, 0.0));
  if (problem_->forcing) {
    for (std::size_t i = 0; i < m; ++i) {
      const Vector fi = nodal_forcing(*problem_, t + tableau_.c()[i] * dt_);
      for (std::size_t a = 0; a < n; ++a) forcing[a * m + i] = fi[a];
      mass_forcing[i] = fem.mass.apply(fi);
    }
  }
  const Vector mv = fem.mass.apply(v);

  // rhs_i = M v + dt sum_j a_ij M F_j
  std::vector<Vector> rhs(m, mv);
  if (problem_->forcing) {
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) {
        const double aij = dt_ * tableau_.a(static_cast<int>(i), static_cast<int>(j));
        for (std::size_t a = 0; a < n; ++a) rhs[i][a] += aij * mass_forcing[j][a];
      }
  }

  Vector stages(n * m);
  if (decomposition_) {
    const auto& d = *decomposition_;
    std::vector<ComplexVector> w(m);
    for (std::size_t i = 0; i < m; ++i) {
      ComplexVector r(n, Complex(0.0));
      for (std::size_t j = 0; j < m; ++j) {
        const Complex vij = d.V_inv(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        for (std::size_t a = 0; a < n; ++a) r[a] += vij * rhs[j][a];
      }
      w[i] = stage_lu_[i].solve(r);
    }
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t a = 0; a < n; ++a) {
        Complex u(0.0);
        for (std::size_t j = 0; j < m; ++j) {
          u += d.V(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * w[j][a];
        }
        stages[a * m + i] = u.real();
      }
    }
  } else {
    Vector flat(n * m);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t i = 0; i < m; ++i) flat[a * m + i] = rhs[i][a];
    stages = block_lu_->solve(flat);
  }
  return rk_update(fem, mass_lu_, tableau_.b(), dt_, v, stages, forcing);
}

// ---------------------------------------------------------------------------

SemiImplicitEuler::SemiImplicitEuler(std::shared_ptr<const SemilinearProblem> problem, double dT)
    : problem_(std::move(problem)),
      dT_((check_step(dT), dT)),
      lu_(combine(1.0, problem_->fem.mass, dT, problem_->fem.stiffness)) {}

Vector SemiImplicitEuler::advance(double, const Vector& v) const {
  check_size(problem_->fem, v);
  Vector w = v;
  for (double& x : w) x += dT_ * problem_->f(x);
  return lu_.solve(problem_->fem.mass.apply(w));
}

// ---------------------------------------------------------------------------

Vector semilinear_stage_residual(const SemilinearProblem& p, const Eigen::MatrixXd& a, double dt,
                                 const Vector& v, const Vector& stages) {
  const std::size_t n = v.size();
  const auto m = static_cast<std::size_t>(a.rows());
  const auto& fem = p.fem;
  // G_j = K U_j - M f(U_j)
  std::vector<Vector> g(m);
  Vector diff(n * m);
  for (std::size_t j = 0; j < m; ++j) {
    Vector uj(n), fj(n);
    for (std::size_t b = 0; b < n; ++b) {
      uj[b] = stages[b * m + j];
      fj[b] = p.f(uj[b]);
    }
    const Vector ku = fem.stiffness.apply(uj);
    const Vector mf = fem.mass.apply(fj);
    g[j].resize(n);
    for (std::size_t b = 0; b < n; ++b) g[j][b] = ku[b] - mf[b];
    Vector dj(n);
    for (std::size_t b = 0; b < n; ++b) dj[b] = uj[b] - v[b];
    const Vector mdj = fem.mass.apply(dj);
    for (std::size_t b = 0; b < n; ++b) diff[b * m + j] = mdj[b];
  }
  Vector r = diff;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      const double aij = dt * a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (aij == 0.0) continue;
      for (std::size_t b = 0; b < n; ++b) r[b * m + i] += aij * g[j][b];
    }
  return r;
}

ImplicitRKSemilinear::ImplicitRKSemilinear(std::shared_ptr<const SemilinearProblem> problem,
                                           const SchemeSpec& scheme, double dt, NewtonConfig newton)
    : problem_(std::move(problem)),
      scheme_name_(scheme.name),
      tableau_(require_tableau(scheme)),
      a_(butcher_matrix(tableau_)),
      dt_((check_step(dt), dt)),
      newton_(newton),
      mass_lu_(problem_->fem.mass) {
  if (!(newton_.tol > 0.0) || newton_.max_iter < 1) throw DomainError("invalid Newton settings");
}

Vector ImplicitRKSemilinear::advance(double t, const Vector& v) const {
  return advance_logged(t, v, nullptr);
}

Vector ImplicitRKSemilinear::advance_logged(double, const Vector& v,
                                            std::vector<double>* residuals) const {
  const auto& p = *problem_;
  const auto& fem = p.fem;
  check_size(fem, v);
  const std::size_t n = v.size();
  const auto m = static_cast<std::size_t>(tableau_.stages());
  const auto& mass = fem.mass;
  const auto& stiff = fem.stiffness;

  Vector stages(n * m);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t i = 0; i < m; ++i) stages[a * m + i] = v[a];

  // Block (a, b) of the Jacobian: M_ab I + dt a_ij (K_ab - M_ab f'(U_{j,b})).
  auto block = [&](double mab, double kab, std::size_t b) {
    Eigen::MatrixXd blk(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) {
        const auto ii = static_cast<Eigen::Index>(i);
        const auto jj = static_cast<Eigen::Index>(j);
        blk(ii, jj) = (i == j ? mab : 0.0) + dt_ * a_(ii, jj) * (kab - mab * p.df(stages[b * m + j]));
      }
    return blk;
  };

  int it = 0;
  for (;; ++it) {
    Vector r = semilinear_stage_residual(p, a_, dt_, v, stages);
    const double norm = inf_norm(r);
    if (residuals) residuals->push_back(norm);
    if (!std::isfinite(norm)) throw NewtonDiverged("Newton residual is not finite");
    if (norm < newton_.tol) break;
    if (it == newton_.max_iter) {
      throw NewtonDiverged("Newton did not reach residual " + std::to_string(newton_.tol) + " in " +
                           std::to_string(newton_.max_iter) + " iterations (last " +
                           std::to_string(norm) + ")");
    }
    std::vector<Eigen::MatrixXd> lower, diag, upper;
    for (std::size_t a = 0; a < n; ++a) {
      diag.push_back(block(mass.diag[a], stiff.diag[a], a));
      if (a + 1 < n) {
        lower.push_back(block(mass.sub[a], stiff.sub[a], a));
        upper.push_back(block(mass.sup[a], stiff.sup[a], a + 1));
      }
    }
    const Vector delta = BlockTridiagonalLU(std::move(lower), std::move(diag), std::move(upper)).solve(r);
    for (std::size_t k = 0; k < stages.size(); ++k) stages[k] -= delta[k];
  }

  steps_.fetch_add(1, std::memory_order_relaxed);
  iterations_.fetch_add(it, std::memory_order_relaxed);
  int seen = max_iterations_.load(std::memory_order_relaxed);
  while (it > seen && !max_iterations_.compare_exchange_weak(seen, it)) {
  }

  Vector forcing(n * m);
  for (std::size_t k = 0; k < forcing.size(); ++k) forcing[k] = p.f(stages[k]);
  return rk_update(fem, mass_lu_, tableau_.b(), dt_, v, stages, forcing);
}

NewtonStats ImplicitRKSemilinear::stats() const noexcept {
  return {steps_.load(), iterations_.load(), max_iterations_.load()};
}

void ImplicitRKSemilinear::reset_stats() noexcept {
  steps_ = 0;
  iterations_ = 0;
  max_iterations_ = 0;
}

// ---------------------------------------------------------------------------

Vector coarse_step(const LinearProblem& p, double t, double dT, const Vector& v) {
  return BackwardEulerLinear(borrow(p), dT).advance(t, v);
}

Vector fine_step_linear(const LinearProblem& p, const SchemeSpec& scheme, double t, double dt,
                        const Vector& v) {
  return ImplicitRKLinear(borrow(p), scheme, dt).advance(t, v);
}

Vector coarse_step_semilinear(const SemilinearProblem& p, double t, double dT, const Vector& v) {
  return SemiImplicitEuler(borrow(p), dT).advance(t, v);
}

Vector fine_step_semilinear(const SemilinearProblem& p, const SchemeSpec& scheme, double t, double dt,
                            const Vector& v, NewtonConfig newton) {
  return ImplicitRKSemilinear(borrow(p), scheme, dt, newton).advance(t, v);
}

}  // namespace pint
