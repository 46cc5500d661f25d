#include "postshrink/risktheory.hpp"

#include "postshrink/linalg.hpp"
#include "postshrink/random.hpp"

#include <cmath>
#include <vector>

namespace postshrink {

namespace {

Eigen::MatrixXd inverse_of(const Eigen::MatrixXd& A, bool allow_pinv, const char* what) {
  if (linalg::is_singular_psd(A)) {
    if (!allow_pinv) throw DataError(std::string("singular ") + what + " block");
  }
  return linalg::pinv_psd(A);
}

enum class Branch { kPlain, kPositive };

McEstimate adr_mc(const AdrInputs& in, Index p2, std::int64_t n_samples, std::uint64_t seed,
                  Branch branch) {
  if (p2 < 3) throw ConfigError("ADR Monte Carlo needs p2 >= 3");
  if (n_samples < 10000) throw ConfigError("ADR Monte Carlo needs at least 10000 samples");
  if (p2 != in.blocks.p2()) throw ConfigError("p2 does not match the weak block dimension");
  const AdrDerived dv = derive(in);
  if (dv.c >= 1.0 || dv.s2n2 == 0.0) return {1.0, 0.0};

  const Eigen::MatrixXd L = linalg::inverse_cholesky_factor(in.blocks.s22_1);
  const Eigen::MatrixXd& S = in.blocks.s22_1;
  const double s2 = in.sigma * in.sigma;
  const double k = static_cast<double>(p2);
  const double one_c = 1.0 - dv.c;

  constexpr std::int64_t kChunk = 10000;
  const std::size_t chunks = static_cast<std::size_t>((n_samples + kChunk - 1) / kChunk);
  std::vector<double> sum(chunks, 0.0), sum2(chunks, 0.0);
  parallel_for(chunks, [&](std::size_t ci) {
    const std::int64_t begin = static_cast<std::int64_t>(ci) * kChunk;
    const std::int64_t m = std::min(kChunk, n_samples - begin);
    Engine rng(derive_seed(seed, {static_cast<std::uint64_t>(ci)}));
    std::normal_distribution<double> normal;
    Eigen::MatrixXd xi(p2, m);
    for (Index j = 0; j < m; ++j)
      for (Index i = 0; i < p2; ++i) xi(i, j) = normal(rng);
    const Eigen::MatrixXd x = (in.sigma * (L * xi)).colwise() + in.delta;
    const Eigen::VectorXd q = (x.array() * (S * x).array()).colwise().sum().transpose() / s2;
    const Eigen::VectorXd proj = x.transpose() * dv.d2;
    double a = 0.0, b = 0.0;
    for (Index j = 0; j < m; ++j) {
      const double t = proj(j) * proj(j) / dv.s2n2;
      double g;
      if (branch == Branch::kPositive && q(j) < k - 2.0)
        g = one_c * (2.0 - t);
      else
        g = one_c * (k - 2.0) / q(j) * (2.0 - (k + 2.0) * t / q(j));
      a += g;
      b += g * g;
    }
    sum[ci] = a;
    sum2[ci] = b;
  });

  double a = 0.0, b = 0.0;
  for (std::size_t ci = 0; ci < chunks; ++ci) {
    a += sum[ci];
    b += sum2[ci];
  }
  const double N = static_cast<double>(n_samples);
  const double mean = a / N;
  const double var = std::max(0.0, (b - N * mean * mean) / (N - 1.0));
  return {1.0 - mean, std::sqrt(var / N)};
}

}  // namespace

SigmaBlocks sigma_blocks_from_gram(const Eigen::MatrixXd& gram, Index p1, bool allow_pinv) {
  const Index d = gram.rows();
  if (gram.cols() != d) throw ConfigError("Gram matrix must be square");
  if (p1 < 1 || p1 >= d) throw ConfigError("p1 must lie in [1, dim)");
  const Index p2 = d - p1;
  SigmaBlocks b;
  b.s11 = gram.topLeftCorner(p1, p1);
  b.s12 = gram.topRightCorner(p1, p2);
  b.s21 = gram.bottomLeftCorner(p2, p1);
  b.s22 = gram.bottomRightCorner(p2, p2);
  const Eigen::MatrixXd i11 = inverse_of(b.s11, allow_pinv, "strong");
  const Eigen::MatrixXd i22 = inverse_of(b.s22, allow_pinv, "weak");
  b.s22_1 = b.s22 - b.s21 * i11 * b.s12;
  b.s11_2 = b.s11 - b.s12 * i22 * b.s21;
  b.s22_1 = 0.5 * (b.s22_1 + b.s22_1.transpose()).eval();
  b.s11_2 = 0.5 * (b.s11_2 + b.s11_2.transpose()).eval();
  return b;
}

SigmaBlocks sigma_blocks(const Eigen::MatrixXd& Z, Index p1, bool allow_pinv) {
  if (Z.rows() < 1) throw ConfigError("sigma_blocks: empty design");
  return sigma_blocks_from_gram(Z.transpose() * Z / static_cast<double>(Z.rows()), p1, allow_pinv);
}

AdrDerived derive(const AdrInputs& in) {
  const SigmaBlocks& b = in.blocks;
  if (in.d1.size() != b.p1()) throw ConfigError("d1 length does not match the strong block");
  if (in.delta.size() != b.p2()) throw ConfigError("delta length does not match the weak block");
  if (!(in.sigma > 0.0)) throw ConfigError("sigma must be positive");
  const double norm = in.d1.norm();
  if (!(norm > 0.0)) throw ConfigError("d1 must be nonzero");
  if (norm > 1.0 + 1e-12) throw ConfigError("d1 must have norm at most 1");

  const Eigen::MatrixXd i11 = linalg::pinv_psd(b.s11);
  const Eigen::MatrixXd i11_2 = linalg::pinv_psd(b.s11_2);
  const Eigen::MatrixXd i22_1 = linalg::pinv_psd(b.s22_1);
  AdrDerived dv;
  dv.d2 = b.s21 * (i11 * in.d1);
  const double s2 = in.sigma * in.sigma;
  const double num = in.d1.dot(i11 * in.d1);
  const double den = in.d1.dot(i11_2 * in.d1);
  dv.s1n2 = s2 * den;
  dv.s2n2 = s2 * dv.d2.dot(i22_1 * dv.d2);
  dv.c = den > 0.0 ? std::min(1.0, num / den) : 1.0;
  return dv;
}

double delta_d1n(const AdrInputs& in) {
  const AdrDerived dv = derive(in);
  if (!(dv.s2n2 > 0.0)) throw DataError("delta_d1n: zero denominator (d2 = 0)");
  const double proj = dv.d2.dot(in.delta);
  return proj * proj / dv.s2n2;
}

double adr_re(const AdrInputs& in) {
  const AdrDerived dv = derive(in);
  if (dv.c >= 1.0 || !(dv.s2n2 > 0.0)) return 1.0;
  return 1.0 - (1.0 - dv.c) * (1.0 - delta_d1n(in));
}

McEstimate adr_se_mc(const AdrInputs& in, Index p2, std::int64_t n_samples, std::uint64_t seed) {
  return adr_mc(in, p2, n_samples, seed, Branch::kPlain);
}

McEstimate adr_pse_mc(const AdrInputs& in, Index p2, std::int64_t n_samples, std::uint64_t seed) {
  return adr_mc(in, p2, n_samples, seed, Branch::kPositive);
}

AdrInputs canonical_adr_inputs(double c, Index p2, double delta_norm) {
  if (!(c > 0.0 && c <= 1.0)) throw ConfigError("c must lie in (0, 1]");
  if (p2 < 1) throw ConfigError("p2 must be positive");
  if (!(delta_norm >= 0.0)) throw ConfigError("delta norm must be non-negative");
  const Index d = p2 + 1;
  Eigen::MatrixXd gram = Eigen::MatrixXd::Identity(d, d);
  const double v = std::sqrt(1.0 / c - 1.0);
  gram(0, 1) = gram(1, 0) = v;
  gram(1, 1) += v * v;
  AdrInputs in;
  in.blocks = sigma_blocks_from_gram(gram, 1);
  in.d1 = Eigen::VectorXd::Ones(1);
  in.delta = Eigen::VectorXd::Zero(p2);
  in.delta(0) = delta_norm;
  in.sigma = 1.0;
  return in;
}

double standardized_error(const Dataset& data, const IndexSet& support,
                          const Eigen::VectorXd& beta_hat, const Eigen::VectorXd& beta_star,
                          const Eigen::VectorXd& d, double sigma) {
  const Index k = static_cast<Index>(support.size());
  if (k == 0) throw ConfigError("standardized_error: empty support");
  if (beta_hat.size() != k || beta_star.size() != k || d.size() != k)
    throw ConfigError("standardized_error: vectors must live on the support");
  if (!(sigma > 0.0)) throw ConfigError("standardized_error: sigma must be positive");
  const double dn = d.norm();
  if (!(dn > 0.0) || dn > 1.0 + 1e-12) throw ConfigError("standardized_error: need 0 < ||d|| <= 1");
  const double n = static_cast<double>(data.n());
  const Eigen::MatrixXd Xs = select_columns(data.X, support);
  const Eigen::MatrixXd gram = Xs.transpose() * Xs / n;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
  if (linalg::is_singular_psd(gram) || ldlt.info() != Eigen::Success)
    throw DataError("standardized_error: singular Gram matrix on the support");
  const double sn = sigma * std::sqrt(d.dot(ldlt.solve(d)));
  return std::sqrt(n) * d.dot(beta_hat - beta_star) / sn;
}

}  // namespace postshrink
