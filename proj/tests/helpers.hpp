#pragma once

#include "postshrink/dataset.hpp"

#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include <unistd.h>

namespace testing_support {

inline Eigen::MatrixXd gaussian(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> nd;
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = nd(rng);
  return m;
}

inline Eigen::VectorXd gaussian_vector(std::mt19937_64& rng, Eigen::Index n) {
  return gaussian(rng, n, 1).col(0);
}

// Random centered regression problem.
inline postshrink::Dataset random_data(std::mt19937_64& rng, Eigen::Index n, Eigen::Index p) {
  const Eigen::MatrixXd X = gaussian(rng, n, p);
  const Eigen::VectorXd beta = gaussian_vector(rng, p);
  const Eigen::VectorXd y = X * beta + gaussian_vector(rng, n);
  return postshrink::center(X, y);
}

// Random symmetric positive definite matrix with a controlled spectrum.
inline Eigen::MatrixXd random_spd(std::mt19937_64& rng, Eigen::Index d) {
  const Eigen::MatrixXd A = gaussian(rng, d + 5, d);
  Eigen::MatrixXd S = A.transpose() * A / static_cast<double>(d + 5);
  S.diagonal().array() += 0.2;
  return S;
}

// Design with X'X / n = I.
inline Eigen::MatrixXd orthonormal_design(std::mt19937_64& rng, Eigen::Index n, Eigen::Index p) {
  Eigen::MatrixXd A = gaussian(rng, n, p);
  A = A.rowwise() - A.colwise().mean();
  // Orthonormalize within the centered subspace.
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(A);
  Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(n, p);
  return Q * std::sqrt(static_cast<double>(n));
}

class TempFile {
 public:
  explicit TempFile(const std::string& contents, const std::string& suffix = ".csv") {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("postshrink_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++) + suffix);
    std::ofstream(path_) << contents;
  }
  ~TempFile() { std::filesystem::remove(path_); }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace testing_support
