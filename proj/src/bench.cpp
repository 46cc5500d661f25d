#include "postshrink/bench.hpp"

#include "postshrink/random.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <ostream>
#include <string>

namespace postshrink {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Ratio of means with a delta-method standard error.
RatioEstimate ratio_of_means(const std::vector<double>& a, const std::vector<double>& b) {
  const double N = static_cast<double>(a.size());
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  if (!(mb > 0.0)) throw DataError("relative error: zero denominator");
  RatioEstimate r;
  r.value = ma / mb;  // sums, so identical inputs give exactly 1
  ma /= N;
  mb /= N;
  if (a.size() < 2) {
    r.std_error = kNaN;
    return r;
  }
  double va = 0.0, vb = 0.0, cab = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    va += (a[i] - ma) * (a[i] - ma);
    vb += (b[i] - mb) * (b[i] - mb);
    cab += (a[i] - ma) * (b[i] - mb);
  }
  va /= N - 1.0;
  vb /= N - 1.0;
  cab /= N - 1.0;
  const double var = (va / (mb * mb) + ma * ma * vb / (mb * mb * mb * mb) - 2.0 * ma * cab / (mb * mb * mb)) / N;
  r.std_error = std::sqrt(std::max(0.0, var));
  return r;
}

std::vector<double> squared_errors(const Eigen::VectorXd& truth, const std::vector<Eigen::VectorXd>& est) {
  std::vector<double> out;
  out.reserve(est.size());
  for (const auto& e : est) {
    if (e.size() != truth.size()) throw ConfigError("rmse: estimate length does not match the true strong set");
    out.push_back((e - truth).squaredNorm());
  }
  return out;
}

void put(std::ostream& out, double v) {
  char buf[64];
  if (std::isnan(v)) {
    out << "nan";
    return;
  }
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  out.write(buf, res.ptr - buf);
}

}  // namespace

RatioEstimate rmse(const Eigen::VectorXd& beta_star_s1, const std::vector<Eigen::VectorXd>& wr,
                   const std::vector<Eigen::VectorXd>& candidate) {
  if (wr.size() != candidate.size()) throw ConfigError("rmse: replication counts differ");
  if (wr.size() < 2) throw ConfigError("rmse: needs at least two replications");
  return ratio_of_means(squared_errors(beta_star_s1, wr), squared_errors(beta_star_s1, candidate));
}

double rrss(const Dataset& data, const IndexSet& s, const Eigen::VectorXd& beta_wr_s,
            const Eigen::VectorXd& beta_candidate_s) {
  if (s.empty()) throw ConfigError("rrss: empty index set");
  if (beta_wr_s.size() != static_cast<Index>(s.size()) ||
      beta_candidate_s.size() != static_cast<Index>(s.size()))
    throw ConfigError("rrss: coefficient length does not match the index set");
  const Eigen::MatrixXd Xs = select_columns(data.X, s);
  const double num = (data.y - Xs * beta_wr_s).squaredNorm();
  const double den = (data.y - Xs * beta_candidate_s).squaredNorm();
  if (!(den > 0.0)) throw DataError("rrss: zero denominator");
  return num / den;
}

CvErrors cv_prediction_error(const Dataset& data, Method method, const TuningConfig& tuning,
                             int partitions, double train_fraction, std::uint64_t seed,
                             const PipelineOptions& opts) {
  if (partitions < 1) throw ConfigError("cv: partitions must be at least 1");
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    throw ConfigError("cv: train fraction must lie in (0, 1)");
  const Index n = data.n();
  const Index n_train = static_cast<Index>(std::llround(train_fraction * static_cast<double>(n)));
  if (n_train < 2 || n_train >= n) throw ConfigError("cv: split leaves an empty training or test set");

  struct Slot {
    double pls, re, wr, se, pse;
  };
  std::vector<Slot> slots(static_cast<std::size_t>(partitions));
  parallel_for(slots.size(), [&](std::size_t k) {
    std::vector<Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Index{0});
    Engine rng(derive_seed(seed, {static_cast<std::uint64_t>(k)}));
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<Index> train(order.begin(), order.begin() + n_train);
    std::vector<Index> test(order.begin() + n_train, order.end());
    std::sort(train.begin(), train.end());
    std::sort(test.begin(), test.end());

    const Eigen::MatrixXd Xtr = select_rows(data.X, train);
    const Eigen::VectorXd ytr = select_rows(data.y, train);
    const Eigen::RowVectorXd mx = Xtr.colwise().mean();
    const double my = ytr.mean();
    const Dataset fold = center(Xtr, ytr);
    const Eigen::MatrixXd Xte = select_rows(data.X, test).rowwise() - mx;
    const Eigen::VectorXd yte = select_rows(data.y, test).array() - my;

    const EstimatorBundle b = run_pipeline(fold, method, tuning, opts);
    const double m = static_cast<double>(test.size());
    auto err = [&](const Eigen::VectorXd& beta) { return (yte - Xte * beta).squaredNorm() / m; };
    slots[k] = {err(b.beta_pls), err(b.full(b.beta_re)), err(b.beta_wr), err(b.full(b.beta_se)),
                err(b.full(b.beta_pse))};
  });

  CvErrors out;
  out.partitions = partitions;
  for (const auto& s : slots) {
    out.pls += s.pls;
    out.re += s.re;
    out.wr += s.wr;
    out.se += s.se;
    out.pse += s.pse;
  }
  const double P = static_cast<double>(partitions);
  out.pls /= P;
  out.re /= P;
  out.wr /= P;
  out.se /= P;
  out.pse /= P;
  return out;
}

std::vector<Index> p_grid_from_tau(Index n, const std::vector<double>& taus) {
  if (n < 2) throw ConfigError("p grid: n must be at least 2");
  std::vector<Index> out;
  for (double t : taus) {
    if (!(t > 0.0)) throw ConfigError("p grid: tau must be positive");
    out.push_back(static_cast<Index>(std::llround(std::pow(static_cast<double>(n), t))));
  }
  return out;
}

RiskReport run_table(const SimConfig& cfg) {
  if (cfg.replications < 1) throw ConfigError("replications must be at least 1");
  if (cfg.p_grid.empty()) throw ConfigError("empty p grid");
  if (!(cfg.failure_budget >= 0.0 && cfg.failure_budget < 1.0))
    throw ConfigError("failure budget must lie in [0, 1)");
  validate(cfg.tuning);
  for (Index p : cfg.p_grid)
    if (p < simulation_min_p(cfg.case_id)) throw ConfigError("p below the minimum for this case");

  RiskReport report;
  report.single_draw = cfg.replications == 1;
  for (Index p : cfg.p_grid) {
    struct Rep {
      bool ok = false;
      double df = 0.0;
      bool guard = false;
      Eigen::VectorXd truth, pls, re, wr, se, pse;
    };
    std::vector<Rep> reps(static_cast<std::size_t>(cfg.replications));
    parallel_for(reps.size(), [&](std::size_t r) {
      const std::uint64_t seed =
          derive_seed(cfg.base_seed, {static_cast<std::uint64_t>(cfg.case_id),
                                      static_cast<std::uint64_t>(p), static_cast<std::uint64_t>(r)});
      try {
        const auto [data, truth] = simulate_case(cfg.case_id, cfg.n, p, cfg.sigma, seed);
        const EstimatorBundle b = run_pipeline(data, cfg.method, cfg.tuning, cfg.pipeline);
        const IndexSet& s1 = truth.partition.s1;
        Rep& out = reps[r];
        out.truth = select_entries(truth.beta_star, s1);
        out.pls = select_entries(b.beta_pls, s1);
        out.wr = select_entries(b.beta_wr, s1);
        out.re = select_entries(b.full(b.beta_re), s1);
        out.se = select_entries(b.full(b.beta_se), s1);
        out.pse = select_entries(b.full(b.beta_pse), s1);
        out.df = static_cast<double>(b.s1.size());
        out.guard = b.guard_triggered;
        out.ok = true;
      } catch (const std::exception&) {
        reps[r].ok = false;
      }
    });

    RiskRow row;
    row.case_id = cfg.case_id;
    row.n = cfg.n;
    row.p = p;
    std::vector<double> e_wr, e_pls, e_re, e_se, e_pse, df;
    int guards = 0;
    for (const auto& r : reps) {
      if (!r.ok) {
        ++row.failures;
        continue;
      }
      e_wr.push_back((r.wr - r.truth).squaredNorm());
      e_pls.push_back((r.pls - r.truth).squaredNorm());
      e_re.push_back((r.re - r.truth).squaredNorm());
      e_se.push_back((r.se - r.truth).squaredNorm());
      e_pse.push_back((r.pse - r.truth).squaredNorm());
      df.push_back(r.df);
      guards += r.guard ? 1 : 0;
    }
    row.replications = static_cast<int>(df.size());
    row.budget_exceeded =
        static_cast<double>(row.failures) > cfg.failure_budget * static_cast<double>(cfg.replications);
    if (row.replications > 0) {
      const double N = static_cast<double>(row.replications);
      const double mean = std::accumulate(df.begin(), df.end(), 0.0) / N;
      double v = 0.0;
      for (double d : df) v += (d - mean) * (d - mean);
      row.df = mean;
      row.df_se = row.replications > 1 ? std::sqrt(v / (N - 1.0) / N) : kNaN;
      row.guard_rate = guards / N;
      row.rmse_pls = ratio_of_means(e_wr, e_pls);
      row.rmse_re = ratio_of_means(e_wr, e_re);
      row.rmse_se = ratio_of_means(e_wr, e_se);
      row.rmse_pse = ratio_of_means(e_wr, e_pse);
    } else {
      row.df = row.df_se = row.guard_rate = kNaN;
      row.rmse_pls = row.rmse_re = row.rmse_se = row.rmse_pse = {kNaN, kNaN};
    }
    report.rows.push_back(row);
  }
  return report;
}

namespace {

const char* const kReportHeader =
    "case,n,p,replications,failures,df,df_se,rmse_pls,rmse_pls_se,rmse_re,rmse_re_se,"
    "rmse_se,rmse_se_se,rmse_pse,rmse_pse_se,guard_rate,budget_exceeded,single_draw";

}  // namespace

void write_report_csv(const RiskReport& report, std::ostream& out) {
  out << kReportHeader << '\n';
  for (const auto& r : report.rows) {
    out << r.case_id << ',' << r.n << ',' << r.p << ',' << r.replications << ',' << r.failures;
    for (double v : {r.df, r.df_se, r.rmse_pls.value, r.rmse_pls.std_error, r.rmse_re.value,
                     r.rmse_re.std_error, r.rmse_se.value, r.rmse_se.std_error, r.rmse_pse.value,
                     r.rmse_pse.std_error, r.guard_rate}) {
      out << ',';
      put(out, v);
    }
    out << ',' << (r.budget_exceeded ? 1 : 0) << ',' << (report.single_draw ? 1 : 0) << '\n';
  }
}

void write_report_csv(const RiskReport& report, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open '" + path.string() + "' for writing");
  write_report_csv(report, out);
  if (!out) throw DataError("write to '" + path.string() + "' failed");
}

RiskReport read_report_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != kReportHeader)
    throw DataError(path.string() + ": not a risk report (unexpected header)");

  // Same layout as write_report_csv; "nan" marks a missing standard error.
  RiskReport report;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<double> v;
    std::size_t start = 0;
    while (true) {
      const std::size_t end = line.find(',', start);
      const std::string cell = line.substr(start, end == std::string::npos ? end : end - start);
      double x = 0.0;
      auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), x);
      if (ec != std::errc() || ptr != cell.data() + cell.size())
        throw DataError(path.string() + ": cannot parse '" + cell + "' at row " + std::to_string(line_no));
      v.push_back(x);
      if (end == std::string::npos) break;
      start = end + 1;
    }
    if (v.size() != 18) throw DataError(path.string() + ": row " + std::to_string(line_no) + " has the wrong width");
    RiskRow r;
    r.case_id = static_cast<int>(v[0]);
    r.n = static_cast<Index>(v[1]);
    r.p = static_cast<Index>(v[2]);
    r.replications = static_cast<int>(v[3]);
    r.failures = static_cast<int>(v[4]);
    r.df = v[5];
    r.df_se = v[6];
    r.rmse_pls = {v[7], v[8]};
    r.rmse_re = {v[9], v[10]};
    r.rmse_se = {v[11], v[12]};
    r.rmse_pse = {v[13], v[14]};
    r.guard_rate = v[15];
    r.budget_exceeded = v[16] != 0.0;
    report.single_draw = v[17] != 0.0;
    report.rows.push_back(r);
  }
  return report;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double ks_statistic_normal(std::vector<double> sample) {
  if (sample.empty()) throw ConfigError("KS: empty sample");
  std::sort(sample.begin(), sample.end());
  const double N = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = normal_cdf(sample[i]);
    d = std::max({d, (static_cast<double>(i) + 1.0) / N - f, f - static_cast<double>(i) / N});
  }
  return d;
}

double ks_pvalue(double d, std::size_t n) {
  if (n == 0) throw ConfigError("KS: empty sample");
  if (d <= 0.0) return 1.0;
  const double rn = std::sqrt(static_cast<double>(n));
  const double lambda = (rn + 0.12 + 0.11 / rn) * d;
  if (lambda < 0.2) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-16) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

}  // namespace postshrink
