#pragma once

#include "postshrink/dataset.hpp"

#include <cstdint>

namespace postshrink {

// Blocks of a Gram matrix over a strong (first p1) and weak (remaining)
// coordinate split, with both Schur complements.
struct SigmaBlocks {
  Eigen::MatrixXd s11, s22, s12, s21;
  Eigen::MatrixXd s22_1;  // s22 - s21 s11^{-1} s12
  Eigen::MatrixXd s11_2;  // s11 - s12 s22^{-1} s21

  Index p1() const { return s11.rows(); }
  Index p2() const { return s22.rows(); }
};

/// Blocks of Z'Z / n. With allow_pinv = false a singular diagonal block is a
/// DataError; otherwise the pseudoinverse stands in for the inverse.
SigmaBlocks sigma_blocks(const Eigen::MatrixXd& Z, Index p1, bool allow_pinv = false);

/// Same, starting from the (p1 + p2) x (p1 + p2) Gram matrix itself.
SigmaBlocks sigma_blocks_from_gram(const Eigen::MatrixXd& gram, Index p1, bool allow_pinv = false);

struct AdrInputs {
  Eigen::VectorXd d1;     // direction over the strong block, 0 < ||d1|| <= 1
  Eigen::VectorXd delta;  // weak coefficients scaled by sqrt(n)
  double sigma = 1.0;
  SigmaBlocks blocks;
};

struct AdrDerived {
  Eigen::VectorXd d2;  // s21 s11^{-1} d1
  double s1n2 = 0.0;   // sigma^2 d1' s11_2^{-1} d1
  double s2n2 = 0.0;   // sigma^2 d2' s22_1^{-1} d2
  double c = 1.0;      // d1' s11^{-1} d1 / d1' s11_2^{-1} d1
};

/// Checks shapes and computes the derived quantities. Throws ConfigError on
/// shape mismatches or a zero direction.
AdrDerived derive(const AdrInputs& in);

/// (d2'delta)^2 / s2n2. Equal to the textbook ratio
/// (d2'delta)^2 / (d2' s22_1^{-1} d2) when sigma = 1.
/// Throws DataError when d2 = 0.
double delta_d1n(const AdrInputs& in);

inline double adr_wr() { return 1.0; }

/// 1 - (1 - c)(1 - delta_d1n).
double adr_re(const AdrInputs& in);

struct McEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
};

/// Monte Carlo risk of the shrinkage estimator relative to WR. Draws
/// x = z + delta with z ~ N(0, sigma^2 s22_1^{-1}) and averages
///   g(x) = (1 - c)(p2 - 2)/Q [2 - (p2 + 2) t / Q],
///   Q = x' s22_1 x / sigma^2,  t = (x'd2)^2 / s2n2.
/// Requires p2 == inputs' weak dimension, p2 >= 3 and n_samples >= 10000.
McEstimate adr_se_mc(const AdrInputs& in, Index p2, std::int64_t n_samples, std::uint64_t seed);

/// Positive-part version: g as above when Q >= p2 - 2, else (1 - c)(2 - t).
McEstimate adr_pse_mc(const AdrInputs& in, Index p2, std::int64_t n_samples, std::uint64_t seed);

/// Smallest instance with a prescribed c: one strong coordinate, s22_1 = I,
/// d1 = 1, delta = delta_norm e_1. Requires 0 < c <= 1 and p2 >= 1.
AdrInputs canonical_adr_inputs(double c, Index p2, double delta_norm);

/// sqrt(n) d'(b_hat - b_star) / s_n with s_n^2 = sigma^2 d' Sigma_n^{-1} d and
/// Sigma_n = X_s'X_s / n over `support`. b_hat, b_star and d live on support.
double standardized_error(const Dataset& data, const IndexSet& support,
                          const Eigen::VectorXd& beta_hat, const Eigen::VectorXd& beta_star,
                          const Eigen::VectorXd& d, double sigma);

}  // namespace postshrink
