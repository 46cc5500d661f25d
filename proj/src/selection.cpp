#include "postshrink/selection.hpp"

#include "postshrink/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace postshrink {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double soft_threshold(double z, double t) {
  if (z > t) return z - t;
  if (z < -t) return z + t;
  return 0.0;
}

void check_lambda(double lambda, const LassoOptions& opts) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ConfigError("lambda must be positive");
  if (!(opts.tol > 0.0)) throw ConfigError("lasso tolerance must be positive");
  if (opts.max_iter < 1) throw ConfigError("max_iter must be at least 1");
}

// One coordinate descent state over a fixed design.
class CoordinateDescent {
 public:
  CoordinateDescent(const Dataset& data, double lambda, const Eigen::VectorXd& pf)
      : X_(data.X), half_lambda_(0.5 * lambda), pf_(pf), norms2_(data.X.colwise().squaredNorm()) {}

  // Exact minimization over coordinate j; returns |change|.
  double update(Index j, Eigen::VectorXd& beta, Eigen::VectorXd& resid) const {
    const double old = beta(j);
    double fresh = 0.0;
    if (norms2_(j) > 0.0 && std::isfinite(pf_(j))) {
      const double z = X_.col(j).dot(resid) + norms2_(j) * old;
      fresh = soft_threshold(z, half_lambda_ * pf_(j)) / norms2_(j);
    }
    const double delta = fresh - old;
    if (delta != 0.0) {
      resid.noalias() -= delta * X_.col(j);
      beta(j) = fresh;
    }
    return std::abs(delta);
  }

 private:
  const Eigen::MatrixXd& X_;
  double half_lambda_;
  const Eigen::VectorXd& pf_;
  Eigen::VectorXd norms2_;
};

}  // namespace

double lambda_max(const Dataset& data, const Eigen::VectorXd& penalty_factors) {
  if (penalty_factors.size() != data.p())
    throw ConfigError("penalty factor length does not match p");
  double best = 0.0;
  for (Index j = 0; j < data.p(); ++j) {
    if (!std::isfinite(penalty_factors(j))) continue;
    if (penalty_factors(j) <= 0.0)
      throw ConfigError("penalty factors must be positive; unpenalized coefficients are not supported");
    // Same dot product as the first coordinate update, so lambda_max itself
    // gives an exactly zero fit.
    best = std::max(best, 2.0 * std::abs(data.X.col(j).dot(data.y)) / penalty_factors(j));
  }
  return best;
}

double lambda_max(const Dataset& data) {
  return lambda_max(data, Eigen::VectorXd::Ones(data.p()));
}

LassoFit weighted_lasso_fit(const Dataset& data, double lambda,
                            const Eigen::VectorXd& penalty_factors, const LassoOptions& opts,
                            const Eigen::VectorXd& warm_start) {
  check_lambda(lambda, opts);
  const Index p = data.p();
  if (penalty_factors.size() != p) throw ConfigError("penalty factor length does not match p");
  for (Index j = 0; j < p; ++j)
    if (!(penalty_factors(j) > 0.0)) throw ConfigError("penalty factors must be positive");

  LassoFit fit;
  fit.beta = warm_start.size() == p ? warm_start : Eigen::VectorXd::Zero(p);
  for (Index j = 0; j < p; ++j)
    if (!std::isfinite(penalty_factors(j))) fit.beta(j) = 0.0;
  Eigen::VectorXd resid = data.y - data.X * fit.beta;

  CoordinateDescent cd(data, lambda, penalty_factors);
  std::vector<Index> active;
  while (fit.n_iter < opts.max_iter) {
    double max_change = 0.0;
    for (Index j = 0; j < p; ++j) max_change = std::max(max_change, cd.update(j, fit.beta, resid));
    ++fit.n_iter;
    if (max_change < opts.tol) {
      fit.converged = true;
      break;
    }
    // Iterate on the current support until it settles, then re-check all.
    active.clear();
    for (Index j = 0; j < p; ++j)
      if (fit.beta(j) != 0.0) active.push_back(j);
    while (fit.n_iter < opts.max_iter) {
      double change = 0.0;
      for (Index j : active) change = std::max(change, cd.update(j, fit.beta, resid));
      ++fit.n_iter;
      if (change < opts.tol) break;
    }
  }
  return fit;
}

LassoFit lasso_fit(const Dataset& data, double lambda, const LassoOptions& opts) {
  return weighted_lasso_fit(data, lambda, Eigen::VectorXd::Ones(data.p()), opts);
}

Eigen::VectorXd adaptive_penalty_factors(const Eigen::VectorXd& init, double gamma, double eps_w) {
  if (!(gamma > 0.0)) throw ConfigError("adaptive Lasso gamma must be positive");
  if (eps_w < 0.0) throw ConfigError("adaptive Lasso weight floor must be non-negative");
  if (!init.allFinite()) throw ConfigError("adaptive Lasso initial estimate must be finite");
  Eigen::VectorXd pf(init.size());
  for (Index j = 0; j < init.size(); ++j) {
    const double w = std::max(std::pow(std::abs(init(j)), gamma), eps_w);
    pf(j) = w > 0.0 ? 1.0 / w : kInf;
  }
  return pf;
}

LassoFit adaptive_lasso_fit(const Dataset& data, double lambda, const Eigen::VectorXd& init,
                            double gamma, double eps_w, const LassoOptions& opts) {
  if (init.size() != data.p()) throw ConfigError("initial estimate length does not match p");
  return weighted_lasso_fit(data, lambda, adaptive_penalty_factors(init, gamma, eps_w), opts);
}

std::vector<double> lambda_grid(double lmax, int count, double min_ratio) {
  if (!(lmax > 0.0)) throw DataError("lambda_max is zero: y is orthogonal to every covariate");
  if (count < 1) throw ConfigError("lambda grid needs at least one point");
  if (!(min_ratio > 0.0 && min_ratio < 1.0)) throw ConfigError("lambda grid ratio must be in (0, 1)");
  std::vector<double> grid(static_cast<std::size_t>(count));
  if (count == 1) {
    grid[0] = lmax;
    return grid;
  }
  const double step = std::log(min_ratio) / (count - 1);
  for (int k = 0; k < count; ++k) grid[k] = lmax * std::exp(step * k);
  return grid;
}

LassoPath lasso_path(const Dataset& data, const std::vector<double>& lambdas,
                     const Eigen::VectorXd& penalty_factors, const LassoOptions& opts) {
  if (lambdas.empty()) throw ConfigError("lasso_path: empty lambda grid");
  for (std::size_t k = 1; k < lambdas.size(); ++k)
    if (!(lambdas[k] < lambdas[k - 1])) throw ConfigError("lasso_path: lambdas must be strictly descending");

  LassoPath path;
  Eigen::VectorXd warm = Eigen::VectorXd::Zero(data.p());
  for (double lambda : lambdas) {
    LassoFit fit = weighted_lasso_fit(data, lambda, penalty_factors, opts, warm);
    warm = fit.beta;
    path.lambdas.push_back(lambda);
    path.betas.push_back(std::move(fit.beta));
    path.n_iter.push_back(fit.n_iter);
    path.converged.push_back(fit.converged);
  }
  return path;
}

IndexSet active_set(const Eigen::VectorXd& beta, double zero_tol) {
  if (zero_tol < 0.0) throw ConfigError("zero_tol must be non-negative");
  IndexSet out;
  for (Index j = 0; j < beta.size(); ++j)
    if (std::abs(beta(j)) > zero_tol) out.push_back(j);
  return out;
}

BicChoice bic_select(const Dataset& data, const LassoPath& path, double zero_tol) {
  if (path.size() == 0) throw ConfigError("bic_select: empty path");
  const double n = static_cast<double>(data.n());
  BicChoice best;
  bool have = false;
  for (std::size_t k = 0; k < path.size(); ++k) {
    const double rss = (data.y - data.X * path.betas[k]).squaredNorm();
    const double df = static_cast<double>(active_set(path.betas[k], zero_tol).size());
    const double bic = rss > 0.0 ? n * std::log(rss / n) + df * std::log(n) : -kInf;
    if (!have || bic < best.bic) {
      best.index = k;
      best.bic = bic;
      have = true;
    }
  }
  best.lambda = path.lambdas[best.index];
  best.beta = path.betas[best.index];
  return best;
}

Eigen::VectorXd restricted_ls(const Dataset& data, const IndexSet& s) {
  if (s.empty()) throw ConfigError("restricted_ls: empty index set");
  if (static_cast<Index>(s.size()) > data.n())
    throw ConfigError("restricted_ls: subset larger than the sample size");
  const Eigen::MatrixXd Xs = select_columns(data.X, s);
  return embed(s, linalg::least_squares(Xs, data.y), data.p());
}

const char* method_name(Method m) { return m == Method::kLasso ? "lasso" : "alasso"; }

Method parse_method(const std::string& name) {
  if (name == "lasso") return Method::kLasso;
  if (name == "alasso" || name == "adaptive-lasso") return Method::kAdaptiveLasso;
  throw ConfigError("unknown method '" + name + "' (expected lasso or alasso)");
}

namespace {

// Initial estimate for the adaptive weights: least squares when n > p,
// otherwise ridge with a small penalty.
Eigen::VectorXd adaptive_init(const Dataset& data, double ridge_scale) {
  if (data.n() > data.p()) return linalg::least_squares(data.X, data.y);
  const double kappa = ridge_scale * lambda_max(data);
  Eigen::MatrixXd K = data.X * data.X.transpose();
  K.diagonal().array() += kappa;
  return data.X.transpose() * K.ldlt().solve(data.y);
}

}  // namespace

SelectionResult select_subset(const Dataset& data, Method method, const SelectionOptions& opts) {
  if (!(opts.lambda_inflation > 0.0)) throw ConfigError("lambda inflation must be positive");
  SelectionResult out;
  out.penalty_factors = method == Method::kLasso
                            ? Eigen::VectorXd::Ones(data.p()).eval()
                            : adaptive_penalty_factors(adaptive_init(data, opts.ridge_init_scale),
                                                       opts.gamma);
  const double floor_ratio = data.p() >= data.n() ? opts.wide_min_ratio : opts.min_ratio;
  const auto grid = lambda_grid(lambda_max(data, out.penalty_factors), opts.grid_size, floor_ratio);
  const LassoPath path = lasso_path(data, grid, out.penalty_factors, opts.lasso);
  BicChoice choice = bic_select(data, path, opts.zero_tol);
  out.lambda = choice.lambda;
  out.bic = choice.bic;
  out.beta_pls = std::move(choice.beta);
  if (opts.lambda_inflation != 1.0) {
    out.lambda *= opts.lambda_inflation;
    out.beta_pls =
        weighted_lasso_fit(data, out.lambda, out.penalty_factors, opts.lasso, out.beta_pls).beta;
  }
  out.s1 = active_set(out.beta_pls, opts.zero_tol);
  return out;
}

}  // namespace postshrink
