#pragma once

#include <iosfwd>
#include <vector>

#include "pint/fem1d.hpp"
#include "pint/propagators.hpp"

namespace pint {

enum class StopRule { FixedIterations, Tolerance };
enum class InitialGuess { CoarseSweep, ConstantU0 };

const char* to_string(StopRule rule) noexcept;
const char* to_string(InitialGuess guess) noexcept;

struct PararealConfig {
  int coarse_intervals = 1;  // N_c
  int J = 2;                 // fine steps per coarse step
  double dt = 0.0;           // fine step; the coarse step is J * dt
  int K_max = 10;            // maximum number of corrections
  StopRule stop = StopRule::FixedIterations;
  double tolerance = 1e-10;  // on max_n ||U_{k+1}^n - U_k^n||, Tolerance mode only
  InitialGuess initial_guess = InitialGuess::CoarseSweep;
  int threads = 1;
  double t0 = 0.0;

  double coarse_step() const noexcept { return J * dt; }
  double final_time() const noexcept { return t0 + coarse_intervals * coarse_step(); }
  /// Throws DomainError on an inconsistent configuration.
  void validate() const;
};

struct IterationRecord {
  int k = 0;
  /// max over n >= 1 of the mass-norm error against the fine reference.
  double max_error = 0.0;
  /// Error at coarse nodes n = 1..N_c.
  std::vector<double> errors;
  /// max over n of the mass-norm change from the previous iterate (0 at k = 0).
  double update_norm = 0.0;
  double fine_sweep_ms = 0.0;
};

struct IterationHistory {
  std::vector<IterationRecord> iterations;  // k = 0, 1, ...
  int corrections = 0;
  bool converged = false;
  /// Tolerance mode only: K_max corrections without meeting the tolerance.
  bool budget_exceeded = false;
  std::vector<Vector> final_iterate;  // U^n, n = 0..N_c
};

/// u^{nJ}, n = 0..N_c, from N_c * J serial fine steps.
std::vector<StateVector> sequential_fine_reference(const Propagator& fine, const Vector& u0,
                                                   const PararealConfig& cfg);

/// Parareal iteration with errors measured against `reference` (computed
/// here when empty). Fine sweeps over the coarse intervals run on
/// cfg.threads workers; corrections are sequential.
IterationHistory run(const FemSystem& fem, const Propagator& coarse, const Propagator& fine,
                     const Vector& u0, const PararealConfig& cfg,
                     std::vector<StateVector> reference = {});

/// exp of the least-squares slope of log(max_error) against k over records
/// with error in [1e-11, 1e-1]. Throws InsufficientData with fewer than 4.
double measured_factor(const IterationHistory& history);

/// Ratios e_{k+1}/e_k over consecutive records whose later error is above
/// `floor`.
std::vector<double> successive_ratios(const IterationHistory& history, double floor = 1e-12);

/// Columns k,max_error,factor_estimate,fine_sweep_ms; factor_estimate is
/// e_k/e_{k-1} and empty at k = 0.
void write_history_csv(std::ostream& out, const IterationHistory& history);

}  // namespace pint
