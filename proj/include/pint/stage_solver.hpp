#pragma once

#include <complex>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "pint/fem1d.hpp"
#include "pint/tableau.hpp"

namespace pint {

/// A = V diag(eigenvalues) V^{-1} for a Butcher matrix.
struct StageDecomposition {
  std::vector<std::complex<double>> eigenvalues;
  Eigen::MatrixXcd V;
  Eigen::MatrixXcd V_inv;
  double reconstruction_error = 0.0;
  double condition = 0.0;
};

inline constexpr double kReconstructionTol = 1e-12;
inline constexpr double kMaxEigenvectorCondition = 1e8;

/// Eigen-decomposition of the tableau's A, or nullopt when A is defective
/// (reconstruction error above 1e-12 or cond(V) above 1e8).
std::optional<StageDecomposition> diagonalize(const ButcherTableau& tableau);

/// Dense-block LU for a block-tridiagonal system with m x m blocks, unknowns
/// ordered node-major (x[node * m + stage]).
class BlockTridiagonalLU {
 public:
  /// lower[i] couples node i+1 to node i, upper[i] node i to node i+1.
  /// Throws SingularMatrix if a pivot block is singular.
  BlockTridiagonalLU(std::vector<Eigen::MatrixXd> lower, std::vector<Eigen::MatrixXd> diag,
                     std::vector<Eigen::MatrixXd> upper);

  int nodes() const noexcept { return static_cast<int>(pivots_.size()); }
  int block_size() const noexcept { return block_; }

  Vector solve(const Vector& rhs) const;

 private:
  int block_;
  std::vector<Eigen::MatrixXd> lower_;  // L_i D_i^{-1} after factorization
  std::vector<Eigen::MatrixXd> upper_;
  std::vector<Eigen::PartialPivLU<Eigen::MatrixXd>> pivots_;
};

/// Blocks of P (x) I_m + dt K (x) A in node-major order, for tridiagonal
/// P and K: block (a, b) = P_ab I + dt K_ab A.
BlockTridiagonalLU kron_block_system(const Tridiagonal<double>& p, const Tridiagonal<double>& k,
                                     const Eigen::MatrixXd& a, double dt);

/// Row-major tableau A as an Eigen matrix.
Eigen::MatrixXd butcher_matrix(const ButcherTableau& tableau);

}  // namespace pint
