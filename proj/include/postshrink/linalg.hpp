#pragma once

#include "postshrink/common.hpp"

namespace postshrink::linalg {

/// Spectral pseudoinverse of a symmetric positive semidefinite matrix.
/// Eigenvalues below eps * dim * max|eigenvalue| are treated as zero.
Eigen::MatrixXd pinv_psd(const Eigen::MatrixXd& A);

/// True when the symmetric matrix has a numerically zero eigenvalue under
/// the same cutoff as pinv_psd.
bool is_singular_psd(const Eigen::MatrixXd& A);

/// Minimum-norm least squares coefficients of y on the columns of X.
Eigen::VectorXd least_squares(const Eigen::MatrixXd& X, const Eigen::VectorXd& y);

/// Applies M = I - X (X'X)^+ X' without forming the n x n matrix.
class ResidualProjector {
 public:
  explicit ResidualProjector(const Eigen::MatrixXd& X);

  Eigen::MatrixXd apply(const Eigen::MatrixXd& V) const;
  Eigen::VectorXd apply(const Eigen::VectorXd& v) const;

  Index rank() const { return rank_; }

 private:
  Eigen::MatrixXd basis_;  // orthonormal basis of span(X), n x rank
  Index rank_ = 0;
};

/// Symmetric inverse square root factor: returns L with L L' = A^{-1} for an
/// SPD matrix A. Throws DataError when A is not positive definite.
Eigen::MatrixXd inverse_cholesky_factor(const Eigen::MatrixXd& A);

}  // namespace postshrink::linalg
