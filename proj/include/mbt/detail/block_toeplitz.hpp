#pragma once

#include <vector>

#include <Eigen/Dense>

namespace mbt::detail {

/// Block lower-triangular Toeplitz matrix with `levels` block rows of size
/// n x n, stored by its first block column: block(i, j) = b[i - j], i >= j.
/// Closed under sums, products and inverses, so the exponential of such a
/// matrix can be computed on the first block column alone.
class LowerBlockToeplitz {
 public:
  LowerBlockToeplitz() = default;
  LowerBlockToeplitz(int n, int levels) : blocks_(levels, Eigen::MatrixXd::Zero(n, n)) {}

  int levels() const { return static_cast<int>(blocks_.size()); }
  int block_size() const { return blocks_.empty() ? 0 : static_cast<int>(blocks_[0].rows()); }

  Eigen::MatrixXd& operator[](int k) { return blocks_[k]; }
  const Eigen::MatrixXd& operator[](int k) const { return blocks_[k]; }

  /// Dense representation, used for testing.
  Eigen::MatrixXd dense() const;

  friend LowerBlockToeplitz operator+(const LowerBlockToeplitz& a, const LowerBlockToeplitz& b);
  friend LowerBlockToeplitz operator-(const LowerBlockToeplitz& a, const LowerBlockToeplitz& b);
  friend LowerBlockToeplitz operator*(double s, const LowerBlockToeplitz& a);
  friend LowerBlockToeplitz operator*(const LowerBlockToeplitz& a, const LowerBlockToeplitz& b);

 private:
  std::vector<Eigen::MatrixXd> blocks_;
};

LowerBlockToeplitz identity_like(const LowerBlockToeplitz& a);
double norm1(const LowerBlockToeplitz& a);
/// Solves q x = p by block forward substitution.
LowerBlockToeplitz solve(const LowerBlockToeplitz& q, const LowerBlockToeplitz& p);

}  // namespace mbt::detail
