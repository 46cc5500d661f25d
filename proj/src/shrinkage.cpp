#include "postshrink/shrinkage.hpp"

#include "postshrink/linalg.hpp"

#include <cmath>
#include <limits>

namespace postshrink {

namespace {

void check_shrink_args(const Eigen::VectorXd& wr, const Eigen::VectorXd& re, Index s2_count,
                       double t_n) {
  if (wr.size() != re.size()) throw ConfigError("shrinkage: WR and RE must share the support s1");
  if (s2_count < 2) throw ConfigError("shrinkage: needs at least two weak signals");
  if (!(t_n > 0.0) || !std::isfinite(t_n)) throw ConfigError("shrinkage: T_n must be positive");
}

}  // namespace

double sigma2_hat(const Dataset& data, const WrFit& wr, Sigma2Fit fit) {
  if (wr.beta_wr.size() != data.p()) throw ConfigError("sigma2_hat: coefficient length does not match p");
  const IndexSet cols =
      fit == Sigma2Fit::kWeakOnly ? wr.partition.s2 : set_union(wr.partition.s1, wr.partition.s2);
  const Index dof = data.n() - static_cast<Index>(cols.size());
  if (dof <= 0) throw DataError("sigma2_hat: no residual degrees of freedom left");
  const Eigen::VectorXd resid =
      data.y - select_columns(data.X, cols) * select_entries(wr.beta_wr, cols);
  return resid.squaredNorm() / static_cast<double>(dof);
}

double compute_tn(const Dataset& data, const WrFit& wr, double sigma2) {
  if (wr.partition.s2.empty()) throw ConfigError("compute_tn: empty weak set");
  if (!(sigma2 > 0.0)) throw ConfigError("compute_tn: sigma2 must be positive");
  const linalg::ResidualProjector m1(select_columns(data.X, wr.partition.s1));
  const Eigen::VectorXd fitted =
      select_columns(data.X, wr.partition.s2) * select_entries(wr.beta_wr, wr.partition.s2);
  return m1.apply(fitted).squaredNorm() / sigma2;
}

Eigen::VectorXd shrink_se(const Eigen::VectorXd& beta_wr_s1, const Eigen::VectorXd& beta_re,
                          Index s2_count, double t_n) {
  check_shrink_args(beta_wr_s1, beta_re, s2_count, t_n);
  const double factor = static_cast<double>(s2_count - 2) / t_n;
  return beta_wr_s1 - factor * (beta_wr_s1 - beta_re);
}

Eigen::VectorXd shrink_pse(const Eigen::VectorXd& beta_wr_s1, const Eigen::VectorXd& beta_re,
                           Index s2_count, double t_n) {
  check_shrink_args(beta_wr_s1, beta_re, s2_count, t_n);
  const double factor = static_cast<double>(s2_count - 2) / t_n;
  if (factor >= 1.0) return beta_re;
  return beta_wr_s1 - factor * (beta_wr_s1 - beta_re);
}

Eigen::VectorXd restricted_fit(const Dataset& data, const IndexSet& s1) {
  if (s1.empty()) throw ConfigError("restricted_fit: empty index set");
  return linalg::least_squares(select_columns(data.X, s1), data.y);
}

EstimatorBundle combine_estimators(const Dataset& data, const IndexSet& s1,
                                   const Eigen::VectorXd& beta_re, const WrFit& wr,
                                   Sigma2Fit sigma2) {
  EstimatorBundle b;
  b.s1 = s1;
  b.beta_re = beta_re;
  b.beta_wr = wr.beta_wr;
  b.partition = wr.partition;
  b.a_n = wr.a_n;
  b.r_n = wr.r_n;
  b.s2_hat_count = static_cast<Index>(wr.partition.s2.size());
  b.sigma2_hat = std::numeric_limits<double>::quiet_NaN();

  const Index kept = static_cast<Index>(s1.size()) + b.s2_hat_count;
  if (b.s2_hat_count <= 2) {
    b.guard_triggered = true;
    b.diagnostics.push_back("fewer than three weak signals selected");
  }
  if (kept >= data.n()) {
    b.guard_triggered = true;
    b.diagnostics.push_back("strong and weak sets together reach the sample size; consider a larger a_n");
  } else {
    b.sigma2_hat = sigma2_hat(data, wr, sigma2);
  }
  if (!b.guard_triggered) {
    if (!(b.sigma2_hat > 0.0)) {
      b.guard_triggered = true;
      b.diagnostics.push_back("zero residual variance");
    } else {
      b.t_n = compute_tn(data, wr, b.sigma2_hat);
      if (!(b.t_n > 0.0)) {
        b.guard_triggered = true;
        b.diagnostics.push_back("weak signals lie in the span of the strong set (T_n = 0)");
      }
    }
  }

  if (b.guard_triggered) {
    b.shrink_factor = 1.0;
    b.beta_se = beta_re;
    b.beta_pse = beta_re;
    return b;
  }
  const Eigen::VectorXd wr_s1 = select_entries(wr.beta_wr, s1);
  b.shrink_factor = static_cast<double>(b.s2_hat_count - 2) / b.t_n;
  b.beta_se = shrink_se(wr_s1, beta_re, b.s2_hat_count, b.t_n);
  b.beta_pse = shrink_pse(wr_s1, beta_re, b.s2_hat_count, b.t_n);
  return b;
}

EstimatorBundle fit_after_selection(const Dataset& data, const IndexSet& s1,
                                    const TuningConfig& tuning, Sigma2Fit sigma2) {
  validate(tuning);
  const double a_n = compute_an(data.n(), tuning.c1, tuning.alpha);
  const double r_n = compute_rn(data.n(), data.p(), a_n, tuning.c2);
  WrFit wr = threshold_wr(WrSolver(data, s1).solve(r_n), s1, a_n);
  wr.r_n = r_n;
  EstimatorBundle b = combine_estimators(data, s1, restricted_fit(data, s1), wr, sigma2);
  b.config = tuning;
  return b;
}

EstimatorBundle run_pipeline(const Dataset& data, Method method, const TuningConfig& tuning,
                             const PipelineOptions& opts) {
  validate(tuning);
  const SelectionResult sel = select_subset(data, method, opts.selection);
  if (sel.s1.empty())
    throw DataError("selection returned no covariates; use a smaller lambda");
  TuningConfig chosen = tuning;
  if (opts.cross_validate)
    chosen = cv_tune(data, sel.s1, opts.c1_grid, opts.c2_grid, tuning.cv_folds, tuning.seed, tuning,
                     opts.sigma2)
                 .config;
  EstimatorBundle b = fit_after_selection(data, sel.s1, chosen, opts.sigma2);
  b.beta_pls = sel.beta_pls;
  b.lambda = sel.lambda;
  return b;
}

}  // namespace postshrink
