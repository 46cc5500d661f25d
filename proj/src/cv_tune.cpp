#include "postshrink/shrinkage.hpp"

#include <limits>
#include <tuple>

namespace postshrink {

namespace {

struct Fold {
  Dataset train;
  Eigen::MatrixXd test_X;  // centered with the training means
  Eigen::VectorXd test_y;  // centered with the training mean
};

Fold split(const Dataset& data, const std::vector<Index>& held_out) {
  std::vector<char> out(static_cast<std::size_t>(data.n()), 0);
  for (Index i : held_out) out[i] = 1;
  std::vector<Index> keep;
  for (Index i = 0; i < data.n(); ++i)
    if (!out[i]) keep.push_back(i);

  const Eigen::MatrixXd Xtr = select_rows(data.X, keep);
  const Eigen::VectorXd ytr = select_rows(data.y, keep);
  const Eigen::RowVectorXd mx = Xtr.colwise().mean();
  const double my = ytr.mean();

  Fold f;
  f.train = center(Xtr, ytr);
  f.test_X = select_rows(data.X, held_out).rowwise() - mx;
  f.test_y = select_rows(data.y, held_out).array() - my;
  return f;
}

}  // namespace

CvTuneResult cv_tune(const Dataset& data, const IndexSet& s1, const std::vector<double>& c1_grid,
                     const std::vector<double>& c2_grid, int folds, std::uint64_t seed,
                     const TuningConfig& base, Sigma2Fit sigma2) {
  if (c1_grid.empty() || c2_grid.empty()) throw ConfigError("cv_tune: empty tuning grid");
  if (s1.empty()) throw ConfigError("cv_tune: empty strong set");
  for (double c : c1_grid)
    if (!(c > 0.0)) throw ConfigError("cv_tune: c1 values must be positive");
  for (double c : c2_grid)
    if (!(c > 0.0)) throw ConfigError("cv_tune: c2 values must be positive");
  const auto groups = make_folds(data.n(), folds, seed);

  const std::size_t n1 = c1_grid.size(), n2 = c2_grid.size();
  std::vector<double> sse(n1 * n2, 0.0);
  for (const auto& held_out : groups) {
    const Fold f = split(data, held_out);
    const Eigen::MatrixXd test_s1 = select_columns(f.test_X, s1);
    const WrSolver solver(f.train, s1);
    const Eigen::VectorXd re = restricted_fit(f.train, s1);
    for (std::size_t a = 0; a < n1; ++a) {
      const double a_n = compute_an(f.train.n(), c1_grid[a], base.alpha);
      for (std::size_t b = 0; b < n2; ++b) {
        const double r_n = compute_rn(f.train.n(), f.train.p(), a_n, c2_grid[b]);
        WrFit wr = threshold_wr(solver.solve(r_n), s1, a_n);
        wr.r_n = r_n;
        const EstimatorBundle est = combine_estimators(f.train, s1, re, wr, sigma2);
        sse[a * n2 + b] += (f.test_y - test_s1 * est.beta_pse).squaredNorm();
      }
    }
  }

  CvTuneResult out;
  out.grid_errors.resize(sse.size());
  for (std::size_t k = 0; k < sse.size(); ++k)
    out.grid_errors[k] = sse[k] / static_cast<double>(data.n());

  // Lexicographic (error, r_n, c1, c2) so that the choice does not depend on
  // the order of the grids or on duplicates.
  using Key = std::tuple<double, double, double, double>;
  Key best{std::numeric_limits<double>::infinity(), 0.0, 0.0, 0.0};
  bool have = false;
  for (std::size_t a = 0; a < n1; ++a) {
    const double a_n = compute_an(data.n(), c1_grid[a], base.alpha);
    for (std::size_t b = 0; b < n2; ++b) {
      const Key key{out.grid_errors[a * n2 + b], compute_rn(data.n(), data.p(), a_n, c2_grid[b]),
                    c1_grid[a], c2_grid[b]};
      if (!have || key < best) {
        best = key;
        have = true;
      }
    }
  }
  out.config = base;
  out.config.c1 = std::get<2>(best);
  out.config.c2 = std::get<3>(best);
  out.config.cv_folds = folds;
  out.config.seed = seed;
  out.cv_error = std::get<0>(best);
  return out;
}

}  // namespace postshrink
