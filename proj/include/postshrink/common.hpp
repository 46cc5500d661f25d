#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace postshrink {

using Index = Eigen::Index;

// Zero-based coefficient positions, kept sorted and unique.
using IndexSet = std::vector<Index>;

// Bad arguments or configuration (CLI exit code 2).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed or degenerate data (CLI exit code 3).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Three disjoint index sets over the coefficient positions: strong (s1),
// weak (s2) and sparse (s3).
struct SubsetPartition {
  IndexSet s1;
  IndexSet s2;
  IndexSet s3;
};

// Which fitted values enter the residual variance estimate.
//   kWeakOnly: residuals y - X_{S2} b_{S2}, divisor n - |S2|
//   kSelected: residuals y - X_{S1 u S2} b_{S1 u S2}, divisor n - |S1| - |S2|
enum class Sigma2Fit { kWeakOnly, kSelected };

/// Checks the partition is pairwise disjoint and lies inside [0, p).
bool partition_is_valid(const SubsetPartition& part, Index p);

/// {0..p-1} minus `s`. `s` must be sorted.
IndexSet complement(const IndexSet& s, Index p);

/// Sorted union of two sorted sets.
IndexSet set_union(const IndexSet& a, const IndexSet& b);

/// Columns of X at positions `idx`, in order.
Eigen::MatrixXd select_columns(const Eigen::MatrixXd& X, const IndexSet& idx);

/// Entries of v at positions `idx`, in order.
Eigen::VectorXd select_entries(const Eigen::VectorXd& v, const IndexSet& idx);

/// Rows of X at positions `idx`, in order.
Eigen::MatrixXd select_rows(const Eigen::MatrixXd& X, const std::vector<Index>& idx);

/// Length-p vector holding `values` at positions `idx` and zero elsewhere.
Eigen::VectorXd embed(const IndexSet& idx, const Eigen::VectorXd& values, Index p);

}  // namespace postshrink
