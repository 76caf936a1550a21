#include "mbt/matrix_exp.hpp"

#include <cmath>

#include "mbt/detail/block_toeplitz.hpp"
#include "mbt/detail/pade.hpp"
#include "mbt/errors.hpp"

namespace mbt {
namespace detail {

Eigen::MatrixXd identity_like(const Eigen::MatrixXd& a) {
  return Eigen::MatrixXd::Identity(a.rows(), a.cols());
}

double norm1(const Eigen::MatrixXd& a) {
  if (a.size() == 0) return 0.0;
  return a.cwiseAbs().colwise().sum().maxCoeff();
}

Eigen::MatrixXd solve(const Eigen::MatrixXd& q, const Eigen::MatrixXd& p) {
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(q);
  if (!(lu.rcond() > 1e-300)) throw NumericError("singular denominator in Pade approximant");
  return lu.solve(p);
}

Eigen::MatrixXd LowerBlockToeplitz::dense() const {
  const int n = block_size();
  const int levels = this->levels();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n * levels, n * levels);
  for (int i = 0; i < levels; ++i)
    for (int j = 0; j <= i; ++j) out.block(i * n, j * n, n, n) = blocks_[i - j];
  return out;
}

LowerBlockToeplitz operator+(const LowerBlockToeplitz& a, const LowerBlockToeplitz& b) {
  LowerBlockToeplitz out = a;
  for (int k = 0; k < a.levels(); ++k) out.blocks_[k] += b.blocks_[k];
  return out;
}

LowerBlockToeplitz operator-(const LowerBlockToeplitz& a, const LowerBlockToeplitz& b) {
  LowerBlockToeplitz out = a;
  for (int k = 0; k < a.levels(); ++k) out.blocks_[k] -= b.blocks_[k];
  return out;
}

LowerBlockToeplitz operator*(double s, const LowerBlockToeplitz& a) {
  LowerBlockToeplitz out = a;
  for (auto& blk : out.blocks_) blk *= s;
  return out;
}

LowerBlockToeplitz operator*(const LowerBlockToeplitz& a, const LowerBlockToeplitz& b) {
  const int levels = a.levels();
  LowerBlockToeplitz out(a.block_size(), levels);
  for (int k = 0; k < levels; ++k) {
    auto& c = out.blocks_[k];
    for (int j = 0; j <= k; ++j) c.noalias() += a.blocks_[j] * b.blocks_[k - j];
  }
  return out;
}

LowerBlockToeplitz identity_like(const LowerBlockToeplitz& a) {
  LowerBlockToeplitz out(a.block_size(), a.levels());
  if (a.levels() > 0) out[0].setIdentity();
  return out;
}

double norm1(const LowerBlockToeplitz& a) {
  if (a.levels() == 0) return 0.0;
  Eigen::RowVectorXd col = Eigen::RowVectorXd::Zero(a.block_size());
  for (int k = 0; k < a.levels(); ++k) col += a[k].cwiseAbs().colwise().sum();
  return col.maxCoeff();
}

LowerBlockToeplitz solve(const LowerBlockToeplitz& q, const LowerBlockToeplitz& p) {
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(q[0]);
  if (!(lu.rcond() > 1e-300)) throw NumericError("singular diagonal block in structured solve");
  LowerBlockToeplitz x(q.block_size(), q.levels());
  for (int k = 0; k < q.levels(); ++k) {
    Eigen::MatrixXd rhs = p[k];
    for (int j = 1; j <= k; ++j) rhs.noalias() -= q[j] * x[k - j];
    x[k] = lu.solve(rhs);
  }
  return x;
}

}  // namespace detail

Matrix matrix_exp(const Matrix& a, double t, const MatrixExpOptions& opts) {
  if (a.rows() != a.cols()) {
    throw StructuralError("matrix_exp requires a square matrix, got " + std::to_string(a.rows()) + "x" +
                          std::to_string(a.cols()));
  }
  if (!(t >= 0.0) || !std::isfinite(t)) throw StructuralError("matrix_exp requires finite t >= 0");
  if (!(opts.tolerance > 0.0)) throw StructuralError("matrix_exp tolerance must be positive");
  if (a.size() == 0) return a;
  if (t == 0.0) return Matrix::Identity(a.rows(), a.cols());
  const Matrix scaled = a * t;
  if (!scaled.allFinite()) throw NumericError("matrix_exp input is not finite");
  Matrix out = detail::expm_scaling_squaring(scaled);
  if (!out.allFinite()) throw NumericError("matrix_exp produced non-finite entries");
  return out;
}

}  // namespace mbt
