#pragma once

#include "postshrink/shrinkage.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

namespace postshrink {

struct RatioEstimate {
  double value = 0.0;
  double std_error = 0.0;  // delta method; NaN for a single replication
};

/// mean ||wr_i - b*||^2 / mean ||cand_i - b*||^2 over replications. All
/// vectors live on the true strong set. Needs at least two replications;
/// a zero denominator is a DataError.
RatioEstimate rmse(const Eigen::VectorXd& beta_star_s1, const std::vector<Eigen::VectorXd>& wr,
                   const std::vector<Eigen::VectorXd>& candidate);

/// ||y - X_s wr_s||^2 / ||y - X_s cand_s||^2.
double rrss(const Dataset& data, const IndexSet& s, const Eigen::VectorXd& beta_wr_s,
            const Eigen::VectorXd& beta_candidate_s);

struct CvErrors {
  double pls = 0.0;
  double re = 0.0;
  double wr = 0.0;
  double se = 0.0;
  double pse = 0.0;
  int partitions = 0;
};

/// Repeated random train/test splits. Each training set is re-centered and
/// run through the full pipeline; test rows are centered with the training
/// means. Returns mean held-out squared prediction errors.
CvErrors cv_prediction_error(const Dataset& data, Method method, const TuningConfig& tuning,
                             int partitions = 500, double train_fraction = 2.0 / 3.0,
                             std::uint64_t seed = 1, const PipelineOptions& opts = {});

/// round(n^tau) for each tau.
std::vector<Index> p_grid_from_tau(Index n, const std::vector<double>& taus);

struct SimConfig {
  int case_id = 1;
  Index n = 200;
  std::vector<Index> p_grid;
  int replications = 200;
  Method method = Method::kLasso;
  TuningConfig tuning;
  PipelineOptions pipeline;
  double sigma = 1.0;
  std::uint64_t base_seed = 1;
  double failure_budget = 0.05;
};

struct RiskRow {
  int case_id = 0;
  Index n = 0;
  Index p = 0;
  int replications = 0;  // successful
  int failures = 0;
  double df = 0.0;  // mean |S1 hat|
  double df_se = 0.0;
  RatioEstimate rmse_pls, rmse_re, rmse_se, rmse_pse;
  double guard_rate = 0.0;
  bool budget_exceeded = false;
};

struct RiskReport {
  std::vector<RiskRow> rows;  // in p_grid order
  bool single_draw = false;   // one replication; standard errors are NaN
};

RiskReport run_table(const SimConfig& config);

void write_report_csv(const RiskReport& report, std::ostream& out);
void write_report_csv(const RiskReport& report, const std::filesystem::path& path);
RiskReport read_report_csv(const std::filesystem::path& path);

/// Two-sided one-sample Kolmogorov-Smirnov statistic against N(0, 1).
double ks_statistic_normal(std::vector<double> sample);

/// Asymptotic p-value of the KS statistic d for sample size n, using the
/// Kolmogorov series with the (sqrt(n) + 0.12 + 0.11 / sqrt(n)) scaling.
double ks_pvalue(double d, std::size_t n);

double normal_cdf(double x);

}  // namespace postshrink
