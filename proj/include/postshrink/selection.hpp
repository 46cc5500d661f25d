#pragma once

#include "postshrink/dataset.hpp"

#include <limits>
#include <vector>

namespace postshrink {

// All penalized fits here minimize
//
//   ||y - X b||^2 + lambda * sum_j pf_j |b_j|
//
// with an unscaled residual sum, so the univariate soft-threshold level is
// lambda / 2 on x_j'r and lambda / (2n) on mean-normalized correlations.

struct LassoOptions {
  double tol = 1e-7;      // stop when the largest coefficient change in a sweep is below tol
  int max_iter = 100000;  // coordinate sweeps
};

struct LassoFit {
  Eigen::VectorXd beta;
  int n_iter = 0;
  bool converged = false;
};

/// Smallest lambda with an all-zero solution: 2 max_j |x_j'y| / pf_j.
/// Coefficients with an infinite penalty factor are ignored.
double lambda_max(const Dataset& data, const Eigen::VectorXd& penalty_factors);
double lambda_max(const Dataset& data);

/// Cyclic coordinate descent for the weighted objective. Entries of
/// penalty_factors may be +infinity, which pins the coefficient at zero.
/// `warm_start`, when non-empty, seeds the iteration.
LassoFit weighted_lasso_fit(const Dataset& data, double lambda,
                            const Eigen::VectorXd& penalty_factors,
                            const LassoOptions& opts = {},
                            const Eigen::VectorXd& warm_start = Eigen::VectorXd());

/// Plain Lasso: every penalty factor is one.
LassoFit lasso_fit(const Dataset& data, double lambda, const LassoOptions& opts = {});

/// Adaptive-Lasso penalty factors 1 / max(|init_j|^gamma, eps_w). With
/// eps_w = 0 an exactly zero init gives an infinite factor.
Eigen::VectorXd adaptive_penalty_factors(const Eigen::VectorXd& init, double gamma,
                                         double eps_w = 0.0);

/// Lasso with penalty lambda |b_j| / |w_j|, w_j = |init_j|^gamma.
LassoFit adaptive_lasso_fit(const Dataset& data, double lambda, const Eigen::VectorXd& init,
                            double gamma = 1.0, double eps_w = 0.0,
                            const LassoOptions& opts = {});

struct LassoPath {
  std::vector<double> lambdas;  // strictly descending
  std::vector<Eigen::VectorXd> betas;
  std::vector<int> n_iter;
  std::vector<bool> converged;

  std::size_t size() const { return lambdas.size(); }
};

/// `count` log-spaced values from lambda_max down to min_ratio * lambda_max.
std::vector<double> lambda_grid(double lambda_max, int count = 100, double min_ratio = 1e-4);

/// Warm-started path over a descending grid.
LassoPath lasso_path(const Dataset& data, const std::vector<double>& lambdas,
                     const Eigen::VectorXd& penalty_factors, const LassoOptions& opts = {});

/// {j : |beta_j| > zero_tol}.
IndexSet active_set(const Eigen::VectorXd& beta, double zero_tol = 1e-10);

struct BicChoice {
  std::size_t index = 0;
  double lambda = 0.0;
  Eigen::VectorXd beta;
  double bic = 0.0;  // -infinity for a perfect fit
};

/// Minimizes n log(RSS/n) + |active| log n over the path. Ties go to the
/// larger lambda; a zero RSS counts as -infinity, so the sparsest perfect
/// fit wins.
BicChoice bic_select(const Dataset& data, const LassoPath& path, double zero_tol = 1e-10);

/// Least squares on the columns in `s`, returned as a length-p vector that
/// is zero off `s`. Uses the pseudoinverse when X_s'X_s is singular.
Eigen::VectorXd restricted_ls(const Dataset& data, const IndexSet& s);

enum class Method { kLasso, kAdaptiveLasso };

const char* method_name(Method m);
Method parse_method(const std::string& name);

struct SelectionOptions {
  int grid_size = 100;
  double min_ratio = 1e-4;        // grid floor when n > p
  double wide_min_ratio = 1e-2;   // grid floor when p >= n
  double lambda_inflation = 1.0;  // multiplies the BIC choice; > 1 gives sparser models
  double gamma = 1.0;             // adaptive-Lasso exponent
  double ridge_init_scale = 1e-3; // initial ridge penalty, relative to lambda_max, when p >= n
  double zero_tol = 1e-10;
  LassoOptions lasso;
};

struct SelectionResult {
  Eigen::VectorXd beta_pls;  // length p
  IndexSet s1;
  double lambda = 0.0;
  double bic = 0.0;
  Eigen::VectorXd penalty_factors;
};

/// Step 1: Lasso or adaptive Lasso over a grid, BIC choice, active set.
SelectionResult select_subset(const Dataset& data, Method method,
                              const SelectionOptions& opts = {});

}  // namespace postshrink
