// Command-line driver: simulation tables, fitting a CSV, repeated-split
// prediction error and the risk calculator.

#include "postshrink/bench.hpp"
#include "postshrink/risktheory.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

using namespace postshrink;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;

struct TuningFlags {
  double c1 = 1.0;
  double c2 = 1.0;
  double alpha = 0.125;
  bool cv = false;
  int folds = 5;
  std::uint64_t seed = 20160101;
  double lambda_inflation = 1.0;
  std::string sigma2 = "selected";

  void add(CLI::App* cmd) {
    cmd->add_option("--c1", c1, "threshold constant");
    cmd->add_option("--c2", c2, "ridge constant");
    cmd->add_option("--alpha", alpha, "threshold rate exponent");
    cmd->add_flag("--cv-tune", cv, "choose c1 and c2 by cross validation");
    cmd->add_option("--cv-folds", folds, "folds for --cv-tune");
    cmd->add_option("--tune-seed", seed, "fold seed for --cv-tune");
    cmd->add_option("--lambda-inflation", lambda_inflation, "multiply the BIC lambda before refitting");
    cmd->add_option("--sigma2", sigma2, "variance fit: selected or weak")
        ->check(CLI::IsMember({"selected", "weak"}));
  }

  TuningConfig tuning() const {
    TuningConfig t;
    t.c1 = c1;
    t.c2 = c2;
    t.alpha = alpha;
    t.cv_folds = folds;
    t.seed = seed;
    validate(t);
    return t;
  }

  PipelineOptions pipeline() const {
    PipelineOptions o;
    o.cross_validate = cv;
    o.selection.lambda_inflation = lambda_inflation;
    o.sigma2 = sigma2 == "weak" ? Sigma2Fit::kWeakOnly : Sigma2Fit::kSelected;
    return o;
  }
};

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc() || ptr != cell.data() + cell.size())
      throw ConfigError("cannot parse list entry '" + cell + "'");
    out.push_back(v);
  }
  if (out.empty()) throw ConfigError("empty list");
  return out;
}

struct DataFlags {
  std::string path;
  std::string response;
  std::string threshold_var;
  std::optional<double> tau;

  void add(CLI::App* cmd) {
    cmd->add_option("--data", path, "CSV file with a header row");
    cmd->add_option("--response", response, "response column");
    cmd->add_option("--threshold-var", threshold_var, "threshold variable for a two-regime design");
    cmd->add_option("--tau", tau, "cut point for --threshold-var");
  }

  // Dataset with labels. With a threshold variable the covariates become
  // [1, x, I(q < tau), I(q < tau) x] before centering.
  Dataset load(std::size_t* dropped) const {
    if (path.empty()) throw ConfigError("--data is required");
    if (response.empty()) throw ConfigError("--response is required");
    const CsvTable t = read_csv(path);
    if (dropped) *dropped = t.dropped_rows;
    const Index yc = t.column(response);
    std::optional<Index> qc;
    if (!threshold_var.empty()) {
      if (!tau) throw ConfigError("--threshold-var needs --tau");
      qc = t.column(threshold_var);
      if (*qc == yc) throw ConfigError("threshold variable and response must differ");
    } else if (tau) {
      throw ConfigError("--tau needs --threshold-var");
    }
    IndexSet cols;
    std::vector<std::string> names;
    for (Index k = 0; k < static_cast<Index>(t.header.size()); ++k) {
      if (k == yc || (qc && k == *qc)) continue;
      cols.push_back(k);
      names.push_back(t.header[k]);
    }
    if (cols.empty()) throw DataError("no covariate columns");
    Eigen::MatrixXd X = select_columns(t.values, cols);
    if (qc) {
      X = expand_threshold_design(X, {t.values.col(*qc), *tau});
      names = expand_threshold_names(names);
    }
    return center(X, t.values.col(yc), names);
  }
};

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw DataError("cannot open '" + path + "' for writing");
  out << text;
}

std::string fmt(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

int run(int argc, char** argv) {
  CLI::App app{"post-selection shrinkage estimation"};
  app.require_subcommand(1);

  // simulate
  auto* sim = app.add_subcommand("simulate", "Monte Carlo relative-risk table");
  int case_id = 1;
  Index n = 200;
  std::string tau_grid = "1.0";
  int reps = 200;
  std::string method_name_arg = "lasso";
  std::uint64_t seed = 1;
  std::string out_path;
  double sigma = 1.0;
  TuningFlags sim_tuning;
  sim->add_option("--case", case_id, "simulation case 1, 2 or 3")->check(CLI::Range(1, 3));
  sim->add_option("--n", n, "sample size");
  sim->add_option("--tau-grid", tau_grid, "comma separated exponents, p = round(n^tau)");
  sim->add_option("--reps", reps, "replications per p");
  sim->add_option("--method", method_name_arg, "lasso or alasso");
  sim->add_option("--seed", seed, "base seed");
  sim->add_option("--sigma", sigma, "noise standard deviation");
  sim->add_option("--out", out_path, "output CSV (stdout when omitted)");
  sim_tuning.add(sim);

  // fit
  auto* fit = app.add_subcommand("fit", "fit every estimator to a CSV file");
  DataFlags fit_data;
  std::string fit_method = "lasso";
  std::string fit_out;
  TuningFlags fit_tuning;
  fit_data.add(fit);
  fit->add_option("--method", fit_method, "lasso or alasso");
  fit->add_option("--out", fit_out, "estimates CSV (stdout when omitted)");
  fit_tuning.add(fit);

  // cv
  auto* cv = app.add_subcommand("cv", "repeated random-split prediction error");
  DataFlags cv_data;
  int partitions = 500;
  double train_fraction = 2.0 / 3.0;
  std::string cv_method = "lasso";
  std::uint64_t cv_seed = 1;
  int cv_case = 1;
  Index cv_n = 200;
  Index cv_p = 200;
  TuningFlags cv_tuning;
  cv_data.add(cv);
  cv->add_option("--partitions", partitions, "number of random splits");
  cv->add_option("--train-fraction", train_fraction, "share of rows used for fitting");
  cv->add_option("--method", cv_method, "lasso or alasso");
  cv->add_option("--seed", cv_seed, "split seed (also the simulation seed without --data)");
  cv->add_option("--case", cv_case, "simulation case when --data is omitted")->check(CLI::Range(1, 3));
  cv->add_option("--n", cv_n, "simulated sample size when --data is omitted");
  cv->add_option("--p", cv_p, "simulated dimension when --data is omitted");
  cv_tuning.add(cv);

  // adr
  auto* adr = app.add_subcommand("adr", "asymptotic risk relative to the weighted ridge estimator");
  double c = 0.5;
  Index p2 = 10;
  double delta_norm = 0.0;
  std::int64_t samples = 200000;
  std::uint64_t adr_seed = 1;
  adr->add_option("--c", c, "efficiency ratio in (0, 1]");
  adr->add_option("--p2", p2, "number of weak coefficients");
  adr->add_option("--delta-norm", delta_norm, "norm of the scaled weak coefficients");
  adr->add_option("--samples", samples, "Monte Carlo draws");
  adr->add_option("--seed", adr_seed, "Monte Carlo seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  if (*sim) {
    SimConfig cfg;
    cfg.case_id = case_id;
    cfg.n = n;
    cfg.p_grid = p_grid_from_tau(n, parse_list(tau_grid));
    cfg.replications = reps;
    cfg.method = parse_method(method_name_arg);
    cfg.tuning = sim_tuning.tuning();
    cfg.pipeline = sim_tuning.pipeline();
    cfg.sigma = sigma;
    cfg.base_seed = seed;
    const RiskReport report = run_table(cfg);
    std::ostringstream os;
    write_report_csv(report, os);
    write_text(out_path, os.str());
    for (const auto& r : report.rows)
      if (r.budget_exceeded)
        std::cerr << "warning: p=" << r.p << " lost " << r.failures << " replications\n";
    return 0;
  }

  if (*fit) {
    std::size_t dropped = 0;
    const Dataset data = fit_data.load(&dropped);
    const EstimatorBundle b =
        run_pipeline(data, parse_method(fit_method), fit_tuning.tuning(), fit_tuning.pipeline());
    std::ostringstream os;
    os << "coefficient_name,pls,re,wr,se,pse\n";
    const Eigen::VectorXd re = b.full(b.beta_re), se = b.full(b.beta_se), pse = b.full(b.beta_pse);
    for (Index j = 0; j < data.p(); ++j) {
      os << data.column_names[j] << ',' << fmt(b.beta_pls(j)) << ',' << fmt(re(j)) << ','
         << fmt(b.beta_wr(j)) << ',' << fmt(se(j)) << ',' << fmt(pse(j)) << '\n';
    }
    write_text(fit_out, os.str());
    std::cerr << "n=" << data.n() << " p=" << data.p() << " dropped_rows=" << dropped
              << " |S1|=" << b.s1.size() << " |S2|=" << b.s2_hat_count << " c1=" << b.config.c1
              << " c2=" << b.config.c2 << " T_n=" << b.t_n << " factor=" << b.shrink_factor
              << (b.guard_triggered ? " guard=on" : " guard=off") << '\n';
    for (const auto& d : b.diagnostics) std::cerr << "note: " << d << '\n';
    return 0;
  }

  if (*cv) {
    Dataset data;
    if (!cv_data.path.empty()) {
      data = cv_data.load(nullptr);
    } else {
      data = simulate_case(cv_case, cv_n, cv_p, 1.0, cv_seed).first;
    }
    const CvErrors e = cv_prediction_error(data, parse_method(cv_method), cv_tuning.tuning(),
                                           partitions, train_fraction, cv_seed, cv_tuning.pipeline());
    std::cout << "estimator,mean_squared_prediction_error\n"
              << "pls," << fmt(e.pls) << "\nre," << fmt(e.re) << "\nwr," << fmt(e.wr) << "\nse,"
              << fmt(e.se) << "\npse," << fmt(e.pse) << '\n';
    return 0;
  }

  if (*adr) {
    const AdrInputs in = canonical_adr_inputs(c, p2, delta_norm);
    const McEstimate se = adr_se_mc(in, p2, samples, adr_seed);
    const McEstimate pse = adr_pse_mc(in, p2, samples, adr_seed);
    std::cout << "estimator,adr,std_error\n"
              << "wr," << fmt(adr_wr()) << ",0\n"
              << "re," << fmt(adr_re(in)) << ",0\n"
              << "se," << fmt(se.estimate) << ',' << fmt(se.std_error) << '\n'
              << "pse," << fmt(pse.estimate) << ',' << fmt(pse.std_error) << '\n';
    return 0;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
