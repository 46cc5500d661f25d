#include "postshrink/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace postshrink {

bool partition_is_valid(const SubsetPartition& part, Index p) {
  std::vector<char> seen(static_cast<std::size_t>(p), 0);
  for (const IndexSet* s : {&part.s1, &part.s2, &part.s3}) {
    for (Index j : *s) {
      if (j < 0 || j >= p || seen[j]) return false;
      seen[j] = 1;
    }
  }
  return true;
}

IndexSet complement(const IndexSet& s, Index p) {
  IndexSet out;
  out.reserve(static_cast<std::size_t>(std::max<Index>(0, p - static_cast<Index>(s.size()))));
  auto it = s.begin();
  for (Index j = 0; j < p; ++j) {
    while (it != s.end() && *it < j) ++it;
    if (it != s.end() && *it == j) continue;
    out.push_back(j);
  }
  return out;
}

IndexSet set_union(const IndexSet& a, const IndexSet& b) {
  IndexSet out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

Eigen::MatrixXd select_columns(const Eigen::MatrixXd& X, const IndexSet& idx) {
  Eigen::MatrixXd out(X.rows(), static_cast<Index>(idx.size()));
  for (std::size_t k = 0; k < idx.size(); ++k) out.col(static_cast<Index>(k)) = X.col(idx[k]);
  return out;
}

Eigen::VectorXd select_entries(const Eigen::VectorXd& v, const IndexSet& idx) {
  Eigen::VectorXd out(static_cast<Index>(idx.size()));
  for (std::size_t k = 0; k < idx.size(); ++k) out(static_cast<Index>(k)) = v(idx[k]);
  return out;
}

Eigen::MatrixXd select_rows(const Eigen::MatrixXd& X, const std::vector<Index>& idx) {
  Eigen::MatrixXd out(static_cast<Index>(idx.size()), X.cols());
  for (std::size_t k = 0; k < idx.size(); ++k) out.row(static_cast<Index>(k)) = X.row(idx[k]);
  return out;
}

Eigen::VectorXd embed(const IndexSet& idx, const Eigen::VectorXd& values, Index p) {
  if (static_cast<Index>(idx.size()) != values.size())
    throw ConfigError("embed: index set and value vector differ in length");
  Eigen::VectorXd out = Eigen::VectorXd::Zero(p);
  for (std::size_t k = 0; k < idx.size(); ++k) out(idx[k]) = values(static_cast<Index>(k));
  return out;
}

namespace linalg {
namespace {

double cutoff(const Eigen::VectorXd& eigenvalues, Index dim) {
  const double largest = eigenvalues.size() ? eigenvalues.cwiseAbs().maxCoeff() : 0.0;
  return std::numeric_limits<double>::epsilon() * static_cast<double>(std::max<Index>(dim, 1)) *
         largest;
}

}  // namespace

Eigen::MatrixXd pinv_psd(const Eigen::MatrixXd& A) {
  if (A.rows() == 0) return A;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
  const Eigen::VectorXd& ev = es.eigenvalues();
  const double tol = cutoff(ev, A.rows());
  Eigen::VectorXd inv(ev.size());
  for (Index k = 0; k < ev.size(); ++k) inv(k) = ev(k) > tol ? 1.0 / ev(k) : 0.0;
  return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
}

bool is_singular_psd(const Eigen::MatrixXd& A) {
  if (A.rows() == 0) return false;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& ev = es.eigenvalues();
  return ev.minCoeff() <= cutoff(ev, A.rows());
}

Eigen::VectorXd least_squares(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
  if (X.cols() == 0) return Eigen::VectorXd(0);
  return pinv_psd(X.transpose() * X) * (X.transpose() * y);
}

ResidualProjector::ResidualProjector(const Eigen::MatrixXd& X) {
  if (X.cols() == 0) {
    basis_.resize(X.rows(), 0);
    return;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(X.transpose() * X);
  const Eigen::VectorXd& ev = es.eigenvalues();
  const double tol = cutoff(ev, X.cols());
  std::vector<Index> keep;
  for (Index k = 0; k < ev.size(); ++k)
    if (ev(k) > tol) keep.push_back(k);
  rank_ = static_cast<Index>(keep.size());
  basis_.resize(X.rows(), rank_);
  for (Index k = 0; k < rank_; ++k)
    basis_.col(k) = X * es.eigenvectors().col(keep[k]) / std::sqrt(ev(keep[k]));
}

Eigen::MatrixXd ResidualProjector::apply(const Eigen::MatrixXd& V) const {
  if (rank_ == 0) return V;
  return V - basis_ * (basis_.transpose() * V);
}

Eigen::VectorXd ResidualProjector::apply(const Eigen::VectorXd& v) const {
  if (rank_ == 0) return v;
  return v - basis_ * (basis_.transpose() * v);
}

Eigen::MatrixXd inverse_cholesky_factor(const Eigen::MatrixXd& A) {
  Eigen::LLT<Eigen::MatrixXd> llt(A);
  if (llt.info() != Eigen::Success) throw DataError("matrix is not positive definite");
  const Index d = A.rows();
  // A = C C'  =>  A^{-1} = C'^{-1} C^{-1}, so L = C'^{-1}.
  Eigen::MatrixXd L = Eigen::MatrixXd::Identity(d, d);
  llt.matrixU().solveInPlace(L);
  return L;
}

}  // namespace linalg
}  // namespace postshrink
