#include "helpers.hpp"

#include "postshrink/bench.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace postshrink;

namespace {

bool same(double a, double b) { return (std::isnan(a) && std::isnan(b)) || a == b; }

}  // namespace

TEST(Rmse, IdenticalCandidateIsExactlyOne) {
  std::mt19937_64 rng(71);
  const Eigen::VectorXd star = testing_support::gaussian_vector(rng, 4);
  std::vector<Eigen::VectorXd> wr;
  for (int r = 0; r < 7; ++r) wr.push_back(star + testing_support::gaussian_vector(rng, 4));
  const RatioEstimate e = rmse(star, wr, wr);
  EXPECT_EQ(e.value, 1.0);
  EXPECT_NEAR(e.std_error, 0.0, 1e-12);
}

TEST(Rmse, TwoReplicationHandExample) {
  // WR errors 0.25 and 1, candidate errors 0.04 and 0.16: 0.625 / 0.1.
  const Eigen::VectorXd star = Eigen::VectorXd::Ones(1);
  const std::vector<Eigen::VectorXd> wr{Eigen::VectorXd::Constant(1, 1.5), Eigen::VectorXd::Zero(1)};
  const std::vector<Eigen::VectorXd> cand{Eigen::VectorXd::Constant(1, 1.2), Eigen::VectorXd::Constant(1, 0.6)};
  EXPECT_NEAR(rmse(star, wr, cand).value, 6.25, 1e-12);
}

TEST(Rmse, DeltaMethodStandardError) {
  // Oracle: the sample variance of a_i - R b_i over mean(b)^2 N.
  std::mt19937_64 rng(72);
  const Eigen::VectorXd star = Eigen::VectorXd::Zero(2);
  std::vector<Eigen::VectorXd> wr, cand;
  for (int r = 0; r < 50; ++r) {
    wr.push_back(testing_support::gaussian_vector(rng, 2));
    cand.push_back(0.5 * testing_support::gaussian_vector(rng, 2));
  }
  const RatioEstimate e = rmse(star, wr, cand);
  std::vector<double> a, b;
  for (int r = 0; r < 50; ++r) {
    a.push_back(wr[r].squaredNorm());
    b.push_back(cand[r].squaredNorm());
  }
  double mb = 0.0;
  for (double v : b) mb += v;
  mb /= 50.0;
  std::vector<double> z;
  for (int r = 0; r < 50; ++r) z.push_back(a[r] - e.value * b[r]);
  double mz = 0.0, vz = 0.0;
  for (double v : z) mz += v / 50.0;
  for (double v : z) vz += (v - mz) * (v - mz) / 49.0;
  EXPECT_NEAR(e.std_error, std::sqrt(vz / 50.0) / mb, 1e-10);
}

TEST(Rmse, Errors) {
  const Eigen::VectorXd star = Eigen::VectorXd::Ones(2);
  const std::vector<Eigen::VectorXd> wr{Eigen::VectorXd::Zero(2), Eigen::VectorXd::Zero(2)};
  EXPECT_THROW(rmse(star, wr, {star, star}), DataError);
  EXPECT_THROW(rmse(star, {wr[0]}, {star}), ConfigError);
  EXPECT_THROW(rmse(star, wr, {star}), ConfigError);
  EXPECT_THROW(rmse(star, wr, {star, Eigen::VectorXd::Zero(3)}), ConfigError);
}

TEST(Rrss, IdentityHandExampleAndErrors) {
  Eigen::MatrixXd X(5, 1);
  X << 1, -1, 2, 0, -2;
  Eigen::VectorXd y(5);
  y << 1, 0, 2, -1, -2;
  const Dataset d = center(X, y);
  const Eigen::VectorXd wr = Eigen::VectorXd::Constant(1, 0.5), cand = Eigen::VectorXd::Ones(1);
  // Residual sums 3.5 and 2.
  EXPECT_NEAR(rrss(d, {0}, wr, cand), 1.75, 1e-12);
  EXPECT_EQ(rrss(d, {0}, wr, wr), 1.0);

  const Dataset exact = center(X, 3.0 * X.col(0));
  EXPECT_THROW(rrss(exact, {0}, wr, Eigen::VectorXd::Constant(1, 3.0)), DataError);
  EXPECT_THROW(rrss(d, {}, wr, cand), ConfigError);
  EXPECT_THROW(rrss(d, {0}, Eigen::VectorXd::Ones(2), cand), ConfigError);
}

TEST(CvError, SinglePartitionDeterministic) {
  const auto [d, truth] = simulate_case(1, 90, 40, 1.0, 73);
  const CvErrors a = cv_prediction_error(d, Method::kLasso, TuningConfig{}, 1, 2.0 / 3.0, 5);
  const CvErrors b = cv_prediction_error(d, Method::kLasso, TuningConfig{}, 1, 2.0 / 3.0, 5);
  EXPECT_EQ(a.partitions, 1);
  EXPECT_EQ(a.pse, b.pse);
  EXPECT_EQ(a.pls, b.pls);
  EXPECT_GT(a.pls, 0.0);
  const CvErrors c = cv_prediction_error(d, Method::kLasso, TuningConfig{}, 1, 2.0 / 3.0, 6);
  EXPECT_NE(a.pls, c.pls);
}

TEST(CvError, NoiselessLinearData) {
  std::mt19937_64 rng(74);
  const Eigen::MatrixXd X = testing_support::gaussian(rng, 90, 15);
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(15);
  beta(0) = 4.0;
  beta(5) = -3.0;
  beta(9) = 5.0;
  const Dataset d = center(X, X * beta);
  const CvErrors e = cv_prediction_error(d, Method::kLasso, TuningConfig{}, 5);
  EXPECT_LT(e.re, 1e-8);
  EXPECT_LT(e.wr, 1e-8);
  EXPECT_LT(e.se, 1e-8);
  EXPECT_LT(e.pse, 1e-8);
  EXPECT_LT(e.pls, 1e-8);
}

TEST(CvError, Errors) {
  const auto [d, truth] = simulate_case(1, 30, 20, 1.0, 75);
  EXPECT_THROW(cv_prediction_error(d, Method::kLasso, TuningConfig{}, 0), ConfigError);
  EXPECT_THROW(cv_prediction_error(d, Method::kLasso, TuningConfig{}, 1, 1.0), ConfigError);
  EXPECT_THROW(cv_prediction_error(d, Method::kLasso, TuningConfig{}, 1, 0.01), ConfigError);
}

TEST(Table, PGridFromExponents) {
  const auto g = p_grid_from_tau(200, {1.0, 1.18});
  EXPECT_EQ(g, (std::vector<Index>{200, 519}));
  EXPECT_THROW(p_grid_from_tau(200, {0.0}), ConfigError);
}

TEST(Table, SingleDrawHasNoStandardErrors) {
  SimConfig cfg;
  cfg.n = 60;
  cfg.p_grid = {30};
  cfg.replications = 1;
  const RiskReport r = run_table(cfg);
  ASSERT_EQ(r.rows.size(), 1u);
  EXPECT_TRUE(r.single_draw);
  EXPECT_TRUE(std::isnan(r.rows[0].df_se));
  EXPECT_TRUE(std::isnan(r.rows[0].rmse_pse.std_error));
  EXPECT_TRUE(std::isfinite(r.rows[0].rmse_pse.value) || r.rows[0].failures == 1);
}

TEST(Table, OrderOfPGridDoesNotMatter) {
  SimConfig cfg;
  cfg.n = 60;
  cfg.replications = 6;
  cfg.p_grid = {30, 50, 70};
  const RiskReport a = run_table(cfg);
  cfg.p_grid = {70, 30, 50};
  const RiskReport b = run_table(cfg);
  for (const RiskRow& ra : a.rows) {
    const auto it = std::find_if(b.rows.begin(), b.rows.end(), [&](const RiskRow& r) { return r.p == ra.p; });
    ASSERT_NE(it, b.rows.end());
    EXPECT_EQ(ra.df, it->df);
    EXPECT_EQ(ra.rmse_re.value, it->rmse_re.value);
    EXPECT_EQ(ra.rmse_pse.value, it->rmse_pse.value);
    EXPECT_EQ(ra.guard_rate, it->guard_rate);
  }
}

TEST(Table, RowsArePositiveAndFinite) {
  SimConfig cfg;
  cfg.n = 80;
  cfg.replications = 8;
  cfg.p_grid = {80};
  cfg.tuning.c1 = 0.3;
  cfg.tuning.c2 = 0.01;
  const RiskRow row = run_table(cfg).rows.at(0);
  EXPECT_EQ(row.replications + row.failures, 8);
  for (double v : {row.rmse_pls.value, row.rmse_re.value, row.rmse_se.value, row.rmse_pse.value}) {
    EXPECT_TRUE(std::isfinite(v));
    EXPECT_GT(v, 0.0);
  }
  EXPECT_GE(row.df, 3.0);
  EXPECT_GE(row.guard_rate, 0.0);
  EXPECT_LE(row.guard_rate, 1.0);
}

TEST(Table, FailuresAreCountedAgainstTheBudget) {
  SimConfig cfg;
  cfg.n = 60;
  cfg.replications = 3;
  cfg.p_grid = {30};
  cfg.pipeline.selection.lambda_inflation = 1e6;  // every selection comes back empty
  const RiskRow row = run_table(cfg).rows.at(0);
  EXPECT_EQ(row.failures, 3);
  EXPECT_EQ(row.replications, 0);
  EXPECT_TRUE(row.budget_exceeded);
  EXPECT_TRUE(std::isnan(row.rmse_re.value));
}

TEST(Table, ConfigErrors) {
  SimConfig cfg;
  cfg.p_grid = {};
  EXPECT_THROW(run_table(cfg), ConfigError);
  cfg.p_grid = {200};
  cfg.replications = 0;
  EXPECT_THROW(run_table(cfg), ConfigError);
  cfg.replications = 1;
  cfg.p_grid = {1};
  EXPECT_THROW(run_table(cfg), ConfigError);
}

TEST(ReportCsv, RoundTripIsValueIdentical) {
  SimConfig cfg;
  cfg.n = 60;
  cfg.replications = 3;
  cfg.p_grid = {30, 45};
  RiskReport r = run_table(cfg);
  r.rows[1].df_se = std::numeric_limits<double>::quiet_NaN();
  r.rows[1].rmse_se = {0.1 + 0.2, 1.0 / 3.0};
  testing_support::TempFile f("");
  write_report_csv(r, f.path());
  const RiskReport back = read_report_csv(f.path());
  ASSERT_EQ(back.rows.size(), r.rows.size());
  EXPECT_EQ(back.single_draw, r.single_draw);
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    const RiskRow &a = r.rows[i], &b = back.rows[i];
    EXPECT_EQ(a.case_id, b.case_id);
    EXPECT_EQ(a.n, b.n);
    EXPECT_EQ(a.p, b.p);
    EXPECT_EQ(a.replications, b.replications);
    EXPECT_EQ(a.failures, b.failures);
    EXPECT_EQ(a.budget_exceeded, b.budget_exceeded);
    for (auto [x, y] : {std::pair{a.df, b.df}, {a.df_se, b.df_se}, {a.guard_rate, b.guard_rate},
                        {a.rmse_pls.value, b.rmse_pls.value}, {a.rmse_pls.std_error, b.rmse_pls.std_error},
                        {a.rmse_re.value, b.rmse_re.value}, {a.rmse_re.std_error, b.rmse_re.std_error},
                        {a.rmse_se.value, b.rmse_se.value}, {a.rmse_se.std_error, b.rmse_se.std_error},
                        {a.rmse_pse.value, b.rmse_pse.value}, {a.rmse_pse.std_error, b.rmse_pse.std_error}})
      EXPECT_TRUE(same(x, y)) << x << " vs " << y;
  }
}

TEST(ReportCsv, RejectsForeignFiles) {
  testing_support::TempFile wrong("a,b\n1,2\n");
  EXPECT_THROW(read_report_csv(wrong.path()), DataError);
  std::ostringstream os;
  write_report_csv(RiskReport{}, os);
  testing_support::TempFile narrow(os.str() + "1,2,3\n");
  EXPECT_THROW(read_report_csv(narrow.path()), DataError);
  EXPECT_THROW(read_report_csv("/nonexistent/report.csv"), DataError);
}

TEST(Ks, StatisticAndPValue) {
  EXPECT_NEAR(ks_statistic_normal({0.0}), 0.5, 1e-15);
  EXPECT_NEAR(normal_cdf(1.959963984540054), 0.975, 1e-12);
  // Published asymptotic critical values of the Kolmogorov distribution.
  const std::size_t n = 1000000;
  const double scale = std::sqrt(1e6) + 0.12 + 0.11 / std::sqrt(1e6);
  EXPECT_NEAR(ks_pvalue(1.2238 / scale, n), 0.10, 1e-3);
  EXPECT_NEAR(ks_pvalue(1.3581 / scale, n), 0.05, 1e-3);
  EXPECT_NEAR(ks_pvalue(1.6276 / scale, n), 0.01, 1e-3);
  EXPECT_EQ(ks_pvalue(0.0, 10), 1.0);
  EXPECT_THROW(ks_statistic_normal({}), ConfigError);
}

TEST(Ks, NormalSampleVersusShiftedSample) {
  std::mt19937_64 rng(76);
  std::normal_distribution<double> nd;
  std::vector<double> good(2000), bad(2000);
  for (auto& v : good) v = nd(rng);
  for (auto& v : bad) v = nd(rng) + 0.3;
  EXPECT_GT(ks_pvalue(ks_statistic_normal(good), 2000), 0.01);
  EXPECT_LT(ks_pvalue(ks_statistic_normal(bad), 2000), 1e-6);
}
