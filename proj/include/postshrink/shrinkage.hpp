#pragma once

#include "postshrink/selection.hpp"
#include "postshrink/wridge.hpp"

#include <string>
#include <vector>

namespace postshrink {

struct EstimatorBundle {
  Eigen::VectorXd beta_pls;  // length p
  IndexSet s1;
  Eigen::VectorXd beta_re;   // on s1
  Eigen::VectorXd beta_wr;   // length p, thresholded
  Eigen::VectorXd beta_se;   // on s1
  Eigen::VectorXd beta_pse;  // on s1
  double t_n = 0.0;
  Index s2_hat_count = 0;
  double sigma2_hat = 0.0;  // NaN when the residual degrees of freedom run out
  // (s2 - 2) / t_n. Set to 1 on the guard path so that the clamp formula
  // reproduces SE = PSE = RE.
  double shrink_factor = 1.0;
  bool guard_triggered = false;
  SubsetPartition partition;
  double lambda = 0.0;
  double a_n = 0.0;
  double r_n = 0.0;
  TuningConfig config;
  std::vector<std::string> diagnostics;

  /// Estimators on s1 embedded into a length-p vector.
  Eigen::VectorXd full(const Eigen::VectorXd& on_s1) const { return embed(s1, on_s1, beta_pls.size()); }
};

/// Residual variance from the thresholded ridge fit.
///   kWeakOnly: sum (y - X_{S2} b_{S2})^2 / (n - |S2|)
///   kSelected: sum (y - X_{S1 u S2} b_{S1 u S2})^2 / (n - |S1| - |S2|)
/// Throws DataError when the divisor is not positive.
double sigma2_hat(const Dataset& data, const WrFit& wr, Sigma2Fit fit = Sigma2Fit::kWeakOnly);

/// b_{S2}' X_{S2}' M_{S1} X_{S2} b_{S2} / sigma2.
double compute_tn(const Dataset& data, const WrFit& wr, double sigma2);

/// wr_s1 - ((s2 - 2) / t_n) (wr_s1 - re)
Eigen::VectorXd shrink_se(const Eigen::VectorXd& beta_wr_s1, const Eigen::VectorXd& beta_re,
                          Index s2_count, double t_n);

/// As shrink_se with the factor clamped at 1.
Eigen::VectorXd shrink_pse(const Eigen::VectorXd& beta_wr_s1, const Eigen::VectorXd& beta_re,
                           Index s2_count, double t_n);

/// Least squares on s1, returned on s1. Minimum norm when rank deficient.
Eigen::VectorXd restricted_fit(const Dataset& data, const IndexSet& s1);

/// Step 3 given RE and the thresholded ridge fit. Fills every field except
/// beta_pls, lambda and config.
EstimatorBundle combine_estimators(const Dataset& data, const IndexSet& s1,
                                   const Eigen::VectorXd& beta_re, const WrFit& wr,
                                   Sigma2Fit sigma2 = Sigma2Fit::kSelected);

/// Steps 2 and 3 for a fixed s1 and tuning.
EstimatorBundle fit_after_selection(const Dataset& data, const IndexSet& s1,
                                    const TuningConfig& tuning,
                                    Sigma2Fit sigma2 = Sigma2Fit::kSelected);

struct PipelineOptions {
  SelectionOptions selection;
  Sigma2Fit sigma2 = Sigma2Fit::kSelected;
  bool cross_validate = false;  // choose (c1, c2) by cv_tune on the selected s1
  std::vector<double> c1_grid = default_c1_grid();
  std::vector<double> c2_grid = default_c2_grid();
};

/// Selection, thresholded ridge and shrinkage. Throws DataError when the
/// selection step returns an empty set.
EstimatorBundle run_pipeline(const Dataset& data, Method method, const TuningConfig& tuning,
                             const PipelineOptions& opts = {});

}  // namespace postshrink
