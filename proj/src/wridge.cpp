#include "postshrink/wridge.hpp"

#include "postshrink/linalg.hpp"
#include "postshrink/random.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace postshrink {

void validate(const TuningConfig& t) {
  if (!(t.alpha > 0.0 && t.alpha <= 0.5)) throw ConfigError("alpha must lie in (0, 1/2]");
  if (!(t.c1 > 0.0) || !std::isfinite(t.c1)) throw ConfigError("c1 must be positive");
  if (!(t.c2 > 0.0) || !std::isfinite(t.c2)) throw ConfigError("c2 must be positive");
  if (t.cv_folds < 2) throw ConfigError("cv_folds must be at least 2");
}

double compute_an(Index n, double c1, double alpha) {
  if (n < 2) throw ConfigError("compute_an: n must be at least 2");
  if (!(c1 > 0.0)) throw ConfigError("compute_an: c1 must be positive");
  if (!(alpha > 0.0 && alpha <= 0.5)) throw ConfigError("compute_an: alpha must lie in (0, 1/2]");
  return c1 * std::pow(static_cast<double>(n), -alpha);
}

double compute_rn(Index n, Index p, double an, double c2) {
  if (n < 16) throw ConfigError("compute_rn: n must be at least 16 for the iterated logarithm");
  if (!(an > 0.0)) throw ConfigError("compute_rn: a_n must be positive");
  if (!(c2 > 0.0)) throw ConfigError("compute_rn: c2 must be positive");
  const double lnln = std::log(std::log(static_cast<double>(n)));
  const double lnmax = std::log(static_cast<double>(std::max(n, p)));
  return c2 / (an * an) * lnln * lnln * lnln * lnmax;
}

// ---------------------------------------------------------------------------

WrSolver::WrSolver(const Dataset& data, IndexSet s1)
    : n_(data.n()), p_(data.p()), s1_(std::move(s1)), rest_(complement(s1_, data.p())) {
  for (std::size_t k = 0; k < s1_.size(); ++k) {
    if (s1_[k] < 0 || s1_[k] >= p_) throw ConfigError("WrSolver: index outside [0, p)");
    if (k > 0 && s1_[k] <= s1_[k - 1]) throw ConfigError("WrSolver: s1 must be sorted and unique");
  }
  const Eigen::MatrixXd X1 = select_columns(data.X, s1_);
  if (rest_.empty()) {
    re_ = linalg::least_squares(X1, data.y);
    return;
  }
  const Eigen::MatrixXd X2 = select_columns(data.X, rest_);
  const Index q = X2.cols();
  wide_ = q > n_;

  // Penalized block.
  {
    const linalg::ResidualProjector m1(X1);
    const Eigen::MatrixXd A = m1.apply(X2);
    const Eigen::VectorXd ym = m1.apply(data.y);
    if (!wide_) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A.transpose() * A);
      pen_vals_ = es.eigenvalues().cwiseMax(0.0);
      pen_lift_ = es.eigenvectors();
      pen_rhs_ = es.eigenvectors().transpose() * (A.transpose() * ym);
    } else {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A * A.transpose());
      pen_vals_ = es.eigenvalues().cwiseMax(0.0);
      pen_lift_ = A.transpose() * es.eigenvectors();
      pen_rhs_ = es.eigenvectors().transpose() * ym;
    }
  }

  // Unpenalized block.
  if (!s1_.empty()) {
    x1tx1_ = X1.transpose() * X1;
    x1ty_ = X1.transpose() * data.y;
    if (!wide_) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(X2.transpose() * X2);
      gram_vals_ = es.eigenvalues().cwiseMax(0.0);
      gram_x1_ = es.eigenvectors().transpose() * (X2.transpose() * X1);
      gram_y_ = es.eigenvectors().transpose() * (X2.transpose() * data.y);
    } else {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(X2 * X2.transpose());
      gram_vals_ = es.eigenvalues().cwiseMax(0.0);
      gram_x1_ = es.eigenvectors().transpose() * X1;
      gram_y_ = es.eigenvectors().transpose() * data.y;
    }
  }
}

Eigen::VectorXd WrSolver::solve(double r) const {
  if (!(r > 0.0) || std::isnan(r)) throw ConfigError("ridge penalty r_n must be positive");
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p_);
  if (degenerate()) {
    for (std::size_t k = 0; k < s1_.size(); ++k) beta(s1_[k]) = re_(static_cast<Index>(k));
    return beta;
  }

  const Eigen::VectorXd shrink = (pen_vals_.array() + r).inverse();
  const Eigen::VectorXd beta2 = pen_lift_ * shrink.cwiseProduct(pen_rhs_);
  for (std::size_t k = 0; k < rest_.size(); ++k) beta(rest_[k]) = beta2(static_cast<Index>(k));

  if (!s1_.empty()) {
    Eigen::MatrixXd lhs;
    Eigen::VectorXd rhs;
    if (!wide_) {
      // X1'M2 = X1' - X1'X2 (r I + X2'X2)^{-1} X2'
      const Eigen::VectorXd w = (gram_vals_.array() + r).inverse();
      lhs = x1tx1_ - gram_x1_.transpose() * w.asDiagonal() * gram_x1_;
      rhs = x1ty_ - gram_x1_.transpose() * w.cwiseProduct(gram_y_);
    } else {
      // M2 = r (r I + X2 X2')^{-1}
      const Eigen::VectorXd w = r * (gram_vals_.array() + r).inverse();
      lhs = gram_x1_.transpose() * w.asDiagonal() * gram_x1_;
      rhs = gram_x1_.transpose() * w.cwiseProduct(gram_y_);
    }
    lhs = 0.5 * (lhs + lhs.transpose()).eval();
    const Eigen::VectorXd beta1 = linalg::pinv_psd(lhs) * rhs;
    for (std::size_t k = 0; k < s1_.size(); ++k) beta(s1_[k]) = beta1(static_cast<Index>(k));
  }
  return beta;
}

Eigen::VectorXd wr_solve(const Dataset& data, const IndexSet& s1, double r_n) {
  return WrSolver(data, s1).solve(r_n);
}

WrFit threshold_wr(const Eigen::VectorXd& beta_tilde, const IndexSet& s1, double a_n) {
  if (!(a_n >= 0.0)) throw ConfigError("threshold a_n must be non-negative");
  const Index p = beta_tilde.size();
  WrFit fit;
  fit.beta_tilde = beta_tilde;
  fit.beta_wr = beta_tilde;
  fit.a_n = a_n;
  fit.partition.s1 = s1;
  std::vector<char> in_s1(static_cast<std::size_t>(p), 0);
  for (Index j : s1) {
    if (j < 0 || j >= p) throw ConfigError("threshold_wr: index outside [0, p)");
    in_s1[j] = 1;
  }
  for (Index j = 0; j < p; ++j) {
    if (in_s1[j]) continue;
    if (std::abs(beta_tilde(j)) > a_n) {
      fit.partition.s2.push_back(j);
    } else {
      fit.beta_wr(j) = 0.0;
      fit.partition.s3.push_back(j);
    }
  }
  return fit;
}

std::vector<double> default_c1_grid() { return {0.5, 1.0, 2.0}; }
std::vector<double> default_c2_grid() { return {0.01, 0.1, 1.0, 10.0}; }

std::vector<std::vector<Index>> make_folds(Index n, int folds, std::uint64_t seed) {
  if (folds < 2) throw ConfigError("cross validation needs at least 2 folds");
  if (n < folds) throw ConfigError("more folds than observations");
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  Engine rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::vector<Index>> out(static_cast<std::size_t>(folds));
  for (Index i = 0; i < n; ++i) out[static_cast<std::size_t>(i % folds)].push_back(order[i]);
  for (auto& f : out) std::sort(f.begin(), f.end());
  return out;
}

}  // namespace postshrink
