#pragma once

#include "postshrink/dataset.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace postshrink {

// Threshold and ridge schedules:
//   a_n = c1 n^(-alpha)
//   r_n = c2 a_n^(-2) (ln ln n)^3 ln(max(n, p))
struct TuningConfig {
  double alpha = 0.125;
  double c1 = 1.0;
  double c2 = 1.0;
  int cv_folds = 5;
  std::uint64_t seed = 20160101;
};

/// Throws ConfigError unless 0 < alpha <= 1/2 and c1, c2 > 0.
void validate(const TuningConfig& t);

double compute_an(Index n, double c1, double alpha);
double compute_rn(Index n, Index p, double an, double c2);

/// Post-selection ridge fit that penalizes only the coefficients outside s1:
///
///   argmin ||y - X b||^2 + r ||b_{s1^c}||^2
///
/// Solved block-wise, with
///   b_{s1^c} = (r I + X2'M1 X2)^{-1} X2'M1 y,   M1 = I - X1 (X1'X1)^+ X1'
///   b_{s1}   = (X1'M2 X1)^{+} X1'M2 y,          M2 = I - X2 (r I + X2'X2)^{-1} X2'
///
/// The constructor does the r-independent work (two eigendecompositions of
/// whichever of the p x p or n x n Gram matrices is smaller) so that solve()
/// is cheap across a tuning grid.
class WrSolver {
 public:
  WrSolver(const Dataset& data, IndexSet s1);

  /// Length-p coefficient vector for ridge penalty r > 0.
  Eigen::VectorXd solve(double r) const;

  /// s1 covers every coefficient, so solve() returns least squares on s1.
  bool degenerate() const { return rest_.empty(); }

  const IndexSet& s1() const { return s1_; }
  const IndexSet& rest() const { return rest_; }

 private:
  Index n_ = 0;
  Index p_ = 0;
  IndexSet s1_;
  IndexSet rest_;
  Eigen::VectorXd re_;  // degenerate case

  // Penalized block. Wide: beta2 = lift_ * diag(1/(ev + r)) * rhs_.
  bool wide_ = false;
  Eigen::VectorXd pen_vals_;
  Eigen::MatrixXd pen_lift_;
  Eigen::VectorXd pen_rhs_;

  // Unpenalized block, from the eigensystem of X2'X2 (or X2 X2').
  Eigen::VectorXd gram_vals_;
  Eigen::MatrixXd gram_x1_;  // eigenbasis' * (X2'X1 or X1)
  Eigen::VectorXd gram_y_;   // eigenbasis' * (X2'y or y)
  Eigen::MatrixXd x1tx1_;
  Eigen::VectorXd x1ty_;
};

/// One-shot convenience wrapper over WrSolver.
Eigen::VectorXd wr_solve(const Dataset& data, const IndexSet& s1, double r_n);

struct WrFit {
  Eigen::VectorXd beta_tilde;  // before thresholding
  Eigen::VectorXd beta_wr;     // after thresholding
  SubsetPartition partition;
  double r_n = 0.0;
  double a_n = 0.0;
};

/// Keeps beta_tilde on s1 and zeroes every other coordinate with
/// |beta_tilde_j| <= a_n. a_n may be +infinity.
WrFit threshold_wr(const Eigen::VectorXd& beta_tilde, const IndexSet& s1, double a_n);

struct CvTuneResult {
  TuningConfig config;
  double cv_error = 0.0;
  std::vector<double> grid_errors;  // c1-major over the grids as passed
};

/// Chooses (c1, c2) by K-fold cross validation of the held-out squared
/// prediction error of the shrinkage fit on s1. Ties go to the smaller r_n,
/// then smaller c1, then smaller c2.
CvTuneResult cv_tune(const Dataset& data, const IndexSet& s1, const std::vector<double>& c1_grid,
                     const std::vector<double>& c2_grid, int folds, std::uint64_t seed,
                     const TuningConfig& base = {},
                     Sigma2Fit sigma2 = Sigma2Fit::kSelected);

std::vector<double> default_c1_grid();
std::vector<double> default_c2_grid();

/// Random assignment of n rows to `folds` nearly equal groups.
std::vector<std::vector<Index>> make_folds(Index n, int folds, std::uint64_t seed);

}  // namespace postshrink
