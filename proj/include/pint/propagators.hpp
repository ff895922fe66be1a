#pragma once

#include <atomic>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pint/fem1d.hpp"
#include "pint/stage_solver.hpp"
#include "pint/tableau.hpp"

namespace pint {

/// u' + A u = f with A realized by the pencil (M, K). An empty forcing means
/// f = 0.
struct LinearProblem {
  FemSystem fem;
  std::function<double(double x, double t)> forcing;
  double T = 1.0;
};

/// Allen-Cahn u' - u_xx = (u - u^3)/eps^2 (Neumann).
struct SemilinearProblem {
  FemSystem fem;
  double epsilon = 1.0;
  double T = 0.1;

  double f(double u) const noexcept { return (u - u * u * u) / (epsilon * epsilon); }
  double df(double u) const noexcept { return (1.0 - 3.0 * u * u) / (epsilon * epsilon); }
};

/// A one-step solution operator with fixed step size.
class Propagator {
 public:
  virtual ~Propagator() = default;
  virtual double step_size() const noexcept = 0;
  /// State at t + step_size() from state v at t. Must be reentrant.
  virtual Vector advance(double t, const Vector& v) const = 0;
  virtual std::string name() const = 0;
};

/// `steps` consecutive calls to advance starting at t.
Vector propagate(const Propagator& p, double t, const Vector& v, int steps);

/// (M + dT K) u = M v + dT M F(t): forcing sampled at the left endpoint.
class BackwardEulerLinear final : public Propagator {
 public:
  BackwardEulerLinear(std::shared_ptr<const LinearProblem> problem, double dT);
  double step_size() const noexcept override { return dT_; }
  Vector advance(double t, const Vector& v) const override;
  std::string name() const override { return "backward-euler"; }

 private:
  std::shared_ptr<const LinearProblem> problem_;
  double dT_;
  TridiagonalLU<double> lu_;
};

/// m-stage implicit Runge-Kutta step for the linear problem. The stage
/// system decouples into m complex tridiagonal solves when the Butcher
/// matrix is diagonalizable; otherwise a block-tridiagonal LU is used.
class ImplicitRKLinear final : public Propagator {
 public:
  /// Throws DomainError if the scheme has no tableau.
  ImplicitRKLinear(std::shared_ptr<const LinearProblem> problem, const SchemeSpec& scheme, double dt,
                   bool force_block_solver = false);
  double step_size() const noexcept override { return dt_; }
  Vector advance(double t, const Vector& v) const override;
  std::string name() const override { return scheme_name_; }
  bool diagonalized() const noexcept { return decomposition_.has_value(); }

 private:
  std::shared_ptr<const LinearProblem> problem_;
  std::string scheme_name_;
  ButcherTableau tableau_;
  double dt_;
  std::optional<StageDecomposition> decomposition_;
  std::vector<TridiagonalLU<std::complex<double>>> stage_lu_;
  std::optional<BlockTridiagonalLU> block_lu_;
  TridiagonalLU<double> mass_lu_;
};

/// (M + dT K) u = M v + dT M f(v), f applied nodally.
class SemiImplicitEuler final : public Propagator {
 public:
  SemiImplicitEuler(std::shared_ptr<const SemilinearProblem> problem, double dT);
  double step_size() const noexcept override { return dT_; }
  Vector advance(double t, const Vector& v) const override;
  std::string name() const override { return "semi-implicit-euler"; }

 private:
  std::shared_ptr<const SemilinearProblem> problem_;
  double dT_;
  TridiagonalLU<double> lu_;
};

struct NewtonConfig {
  double tol = 1e-11;
  int max_iter = 25;
};

struct NewtonStats {
  long steps = 0;
  long iterations = 0;
  int max_iterations = 0;
};

/// Fully implicit m-stage step for the Allen-Cahn problem, Newton on the
/// coupled stage system with all stages started at v.
class ImplicitRKSemilinear final : public Propagator {
 public:
  ImplicitRKSemilinear(std::shared_ptr<const SemilinearProblem> problem, const SchemeSpec& scheme,
                       double dt, NewtonConfig newton = {});
  double step_size() const noexcept override { return dt_; }
  Vector advance(double t, const Vector& v) const override;
  std::string name() const override { return scheme_name_; }

  /// advance, additionally recording the residual infinity-norm before each
  /// Newton update and after the last one.
  Vector advance_logged(double t, const Vector& v, std::vector<double>* residuals) const;

  NewtonStats stats() const noexcept;
  void reset_stats() noexcept;

 private:
  std::shared_ptr<const SemilinearProblem> problem_;
  std::string scheme_name_;
  ButcherTableau tableau_;
  Eigen::MatrixXd a_;
  double dt_;
  NewtonConfig newton_;
  TridiagonalLU<double> mass_lu_;
  mutable std::atomic<long> steps_{0};
  mutable std::atomic<long> iterations_{0};
  mutable std::atomic<int> max_iterations_{0};
};

/// Stage residual R_i = M(U_i - v) + dt sum_j a_ij (K U_j - M f(U_j)),
/// stages stored node-major (U[node * m + i]).
Vector semilinear_stage_residual(const SemilinearProblem& p, const Eigen::MatrixXd& a, double dt,
                                 const Vector& v, const Vector& stages);

/// u+ = v + dt sum_i b_i (F_i - M^{-1} K U_i), node-major stages and loads.
Vector rk_update(const FemSystem& fem, const TridiagonalLU<double>& mass_lu,
                 const std::vector<double>& b, double dt, const Vector& v, const Vector& stages,
                 const Vector& stage_forcing);

Vector coarse_step(const LinearProblem& p, double t, double dT, const Vector& v);
Vector fine_step_linear(const LinearProblem& p, const SchemeSpec& scheme, double t, double dt,
                        const Vector& v);
Vector coarse_step_semilinear(const SemilinearProblem& p, double t, double dT, const Vector& v);
Vector fine_step_semilinear(const SemilinearProblem& p, const SchemeSpec& scheme, double t, double dt,
                            const Vector& v, NewtonConfig newton = {});

}  // namespace pint
