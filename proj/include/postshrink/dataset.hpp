#pragma once

#include "postshrink/common.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace postshrink {

// Centered regression data. Every column of X and y has mean zero.
struct Dataset {
  Eigen::MatrixXd X;
  Eigen::VectorXd y;
  std::vector<std::string> column_names;  // empty or length p

  Index n() const { return X.rows(); }
  Index p() const { return X.cols(); }
};

// Ground truth for synthetic data.
struct TrueModel {
  Eigen::VectorXd beta_star;
  SubsetPartition partition;  // s1 strong, s2 weak, s3 zero
  double sigma = 1.0;
};

// Threshold variable and cut point for the two-regime design.
struct ThresholdSpec {
  Eigen::VectorXd q;
  double tau = 0.0;
};

/// Subtracts column means from X and the mean from y.
/// Throws ConfigError on dimension mismatch or n < 2, DataError on
/// non-finite entries.
Dataset center(const Eigen::MatrixXd& raw_X, const Eigen::VectorXd& raw_y,
               std::vector<std::string> column_names = {});

// Parsed numeric CSV before any modelling decisions.
struct CsvTable {
  std::vector<std::string> header;
  Eigen::MatrixXd values;   // complete rows only
  std::size_t dropped_rows = 0;

  /// Column position by name. Throws DataError listing the available names.
  Index column(const std::string& name) const;
};

/// Reads a comma separated file with a header row. Rows with an empty cell
/// are dropped and counted; any other unparseable cell is a DataError that
/// names the row and column.
CsvTable read_csv(const std::filesystem::path& path);

struct LoadedData {
  Dataset data;
  std::size_t dropped_rows = 0;
};

/// read_csv followed by center, with `response_column` as y and every other
/// column as a covariate in file order.
LoadedData load_csv(const std::filesystem::path& path, const std::string& response_column);

/// Smallest p accepted by simulate_case for each case id.
Index simulation_min_p(int case_id);

/// Draws one data set from simulation case 1, 2 or 3. Covariates are
/// x = xi1^2 + xi2 with independent standard normals; y = X beta* + sigma eps,
/// then centered. Nonzero coefficients get a random sign.
std::pair<Dataset, TrueModel> simulate_case(int case_id, Index n, Index p, double sigma,
                                            std::uint64_t seed);

/// Columns [1, base, I(q < tau), I(q < tau) * base]; n x (2k + 2).
Eigen::MatrixXd expand_threshold_design(const Eigen::MatrixXd& base_X, const ThresholdSpec& spec);

/// Column labels matching expand_threshold_design.
std::vector<std::string> expand_threshold_names(const std::vector<std::string>& base_names);

}  // namespace postshrink
