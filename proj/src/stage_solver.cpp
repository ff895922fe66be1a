#include "pint/stage_solver.hpp"

#include <cmath>
#include <limits>

namespace pint {

Eigen::MatrixXd butcher_matrix(const ButcherTableau& tableau) {
  const int m = tableau.stages();
  Eigen::MatrixXd a(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) a(i, j) = tableau.a(i, j);
  return a;
}

std::optional<StageDecomposition> diagonalize(const ButcherTableau& tableau) {
  const Eigen::MatrixXd a = butcher_matrix(tableau);
  Eigen::EigenSolver<Eigen::MatrixXd> es(a);
  if (es.info() != Eigen::Success) return std::nullopt;

  StageDecomposition d;
  d.V = es.eigenvectors();
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(d.V);
  const auto& sv = svd.singularValues();
  d.condition = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1)
                                        : std::numeric_limits<double>::infinity();
  if (!(d.condition < kMaxEigenvectorCondition)) return std::nullopt;

  d.V_inv = d.V.inverse();
  const Eigen::VectorXcd lambda = es.eigenvalues();
  for (int i = 0; i < lambda.size(); ++i) d.eigenvalues.push_back(lambda(i));
  const Eigen::MatrixXcd rebuilt = d.V * lambda.asDiagonal() * d.V_inv;
  d.reconstruction_error = (rebuilt - a.cast<std::complex<double>>()).cwiseAbs().rowwise().sum().maxCoeff();
  if (!(d.reconstruction_error < kReconstructionTol)) return std::nullopt;
  return d;
}

BlockTridiagonalLU::BlockTridiagonalLU(std::vector<Eigen::MatrixXd> lower,
                                       std::vector<Eigen::MatrixXd> diag,
                                       std::vector<Eigen::MatrixXd> upper)
    : block_(diag.empty() ? 0 : static_cast<int>(diag.front().rows())),
      lower_(std::move(lower)),
      upper_(std::move(upper)) {
  const std::size_t n = diag.size();
  if (n == 0 || lower_.size() + 1 != n || upper_.size() + 1 != n) {
    throw DomainError("block-tridiagonal band sizes do not match");
  }
  pivots_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) diag[i] -= lower_[i - 1] * upper_[i - 1];
    pivots_.emplace_back(diag[i]);
    const double scale = diag[i].cwiseAbs().maxCoeff();
    const double det = std::abs(pivots_.back().determinant());
    if (!(det > std::pow(1e-14 * scale, block_))) {
      throw SingularMatrix("singular pivot block at node " + std::to_string(i));
    }
    if (i + 1 < n) {
      lower_[i] = lower_[i] * pivots_.back().inverse();
    }
  }
}

Vector BlockTridiagonalLU::solve(const Vector& rhs) const {
  const std::size_t n = pivots_.size();
  const auto m = static_cast<Eigen::Index>(block_);
  if (rhs.size() != n * static_cast<std::size_t>(block_)) throw DomainError("rhs has the wrong length");

  std::vector<Eigen::VectorXd> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = Eigen::Map<const Eigen::VectorXd>(rhs.data() + i * static_cast<std::size_t>(m), m);
    if (i > 0) y[i] -= lower_[i - 1] * y[i - 1];
  }
  Vector x(rhs.size());
  Eigen::VectorXd next;
  for (std::size_t i = n; i-- > 0;) {
    Eigen::VectorXd b = y[i];
    if (i + 1 < n) b -= upper_[i] * next;
    next = pivots_[i].solve(b);
    Eigen::Map<Eigen::VectorXd>(x.data() + i * static_cast<std::size_t>(m), m) = next;
  }
  return x;
}

BlockTridiagonalLU kron_block_system(const Tridiagonal<double>& p, const Tridiagonal<double>& k,
                                     const Eigen::MatrixXd& a, double dt) {
  const auto n = static_cast<std::size_t>(p.size());
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(a.rows(), a.cols());
  std::vector<Eigen::MatrixXd> lower, diag, upper;
  for (std::size_t i = 0; i < n; ++i) {
    diag.push_back(p.diag[i] * id + dt * k.diag[i] * a);
    if (i + 1 < n) {
      lower.push_back(p.sub[i] * id + dt * k.sub[i] * a);
      upper.push_back(p.sup[i] * id + dt * k.sup[i] * a);
    }
  }
  return BlockTridiagonalLU(std::move(lower), std::move(diag), std::move(upper));
}

}  // namespace pint
