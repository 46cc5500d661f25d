#include "postshrink/dataset.hpp"

#include "postshrink/random.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace postshrink {

Dataset center(const Eigen::MatrixXd& raw_X, const Eigen::VectorXd& raw_y,
               std::vector<std::string> column_names) {
  if (raw_X.rows() != raw_y.size())
    throw ConfigError("center: X has " + std::to_string(raw_X.rows()) + " rows but y has " +
                      std::to_string(raw_y.size()) + " entries");
  if (raw_X.rows() < 2) throw ConfigError("center: need at least 2 observations");
  if (raw_X.cols() < 1) throw ConfigError("center: need at least 1 covariate");
  if (!column_names.empty() && static_cast<Index>(column_names.size()) != raw_X.cols())
    throw ConfigError("center: column name count does not match X");
  if (!raw_X.allFinite() || !raw_y.allFinite()) throw DataError("center: non-finite input");

  Dataset d;
  d.X = raw_X.rowwise() - raw_X.colwise().mean();
  d.y = raw_y.array() - raw_y.mean();
  d.column_names = std::move(column_names);
  return d;
}

// ---------------------------------------------------------------------------
// CSV

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    std::size_t pos = line.find(',', start);
    out.push_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

bool is_missing(std::string_view cell) { return cell.empty() || cell == "NA"; }

}  // namespace

Index CsvTable::column(const std::string& name) const {
  for (std::size_t k = 0; k < header.size(); ++k)
    if (header[k] == name) return static_cast<Index>(k);
  std::string available;
  for (const auto& h : header) available += (available.empty() ? "" : ", ") + h;
  throw DataError("column '" + name + "' not found; available columns: " + available);
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());

  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) throw DataError(path.string() + ": missing header row");
  if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
  for (auto name : split_commas(line)) table.header.emplace_back(name);
  const std::size_t width = table.header.size();

  std::vector<double> cells;
  std::size_t kept = 0;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto fields = split_commas(line);
    if (fields.size() > width)
      throw DataError(path.string() + ": row " + std::to_string(line_no) + " has " +
                      std::to_string(fields.size()) + " cells, header has " +
                      std::to_string(width));
    bool missing = fields.size() < width;
    std::vector<double> row(width);
    for (std::size_t k = 0; k < fields.size() && !missing; ++k) {
      if (is_missing(fields[k])) {
        missing = true;
        break;
      }
      const char* first = fields[k].data();
      const char* last = first + fields[k].size();
      if (*first == '+') ++first;
      auto [ptr, ec] = std::from_chars(first, last, row[k]);
      if (ec != std::errc() || ptr != last || !std::isfinite(row[k]))
        throw DataError(path.string() + ": cannot parse '" + std::string(fields[k]) +
                        "' at row " + std::to_string(line_no) + ", column '" +
                        table.header[k] + "'");
    }
    if (missing) {
      ++table.dropped_rows;
      continue;
    }
    cells.insert(cells.end(), row.begin(), row.end());
    ++kept;
  }

  table.values.resize(static_cast<Index>(kept), static_cast<Index>(width));
  for (std::size_t i = 0; i < kept; ++i)
    for (std::size_t k = 0; k < width; ++k)
      table.values(static_cast<Index>(i), static_cast<Index>(k)) = cells[i * width + k];
  return table;
}

LoadedData load_csv(const std::filesystem::path& path, const std::string& response_column) {
  CsvTable table = read_csv(path);
  const Index response = table.column(response_column);
  const Index width = static_cast<Index>(table.header.size());
  IndexSet covariates;
  std::vector<std::string> names;
  for (Index k = 0; k < width; ++k) {
    if (k == response) continue;
    covariates.push_back(k);
    names.push_back(table.header[k]);
  }
  if (covariates.empty()) throw DataError(path.string() + ": no covariate columns");
  if (table.values.rows() < 2)
    throw DataError(path.string() + ": fewer than 2 complete rows");
  LoadedData out;
  out.data = center(select_columns(table.values, covariates), table.values.col(response),
                    std::move(names));
  out.dropped_rows = table.dropped_rows;
  return out;
}

// ---------------------------------------------------------------------------
// Simulation designs

Index simulation_min_p(int case_id) {
  switch (case_id) {
    case 1: return 13;
    case 2: return 53;
    case 3: return 24;
    default: throw ConfigError("simulation case must be 1, 2 or 3");
  }
}

std::pair<Dataset, TrueModel> simulate_case(int case_id, Index n, Index p, double sigma,
                                            std::uint64_t seed) {
  const Index min_p = simulation_min_p(case_id);
  if (p < min_p)
    throw ConfigError("case " + std::to_string(case_id) + " needs p >= " +
                      std::to_string(min_p) + ", got " + std::to_string(p));
  if (n < 2) throw ConfigError("simulate_case: n must be at least 2");
  if (!(sigma > 0.0)) throw ConfigError("simulate_case: sigma must be positive");

  Index n_strong = 3, n_weak = 0;
  double strong = 0.0, weak = 0.0;
  switch (case_id) {
    case 1: n_weak = 10; strong = 5.0; weak = 0.5; break;
    case 2: n_weak = 50; strong = 10.0; weak = 0.1; break;
    case 3: n_weak = p - 23; strong = 10.0; weak = 0.1; break;
  }

  Engine rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::bernoulli_distribution coin(0.5);

  Eigen::MatrixXd X(n, p);
  for (Index s = 0; s < p; ++s) {
    for (Index i = 0; i < n; ++i) {
      const double xi1 = normal(rng);
      const double xi2 = normal(rng);
      X(i, s) = xi1 * xi1 + xi2;
    }
  }

  TrueModel truth;
  truth.sigma = sigma;
  truth.beta_star = Eigen::VectorXd::Zero(p);
  for (Index j = 0; j < p; ++j) {
    if (j < n_strong) {
      truth.beta_star(j) = strong;
      truth.partition.s1.push_back(j);
    } else if (j < n_strong + n_weak) {
      truth.beta_star(j) = weak;
      truth.partition.s2.push_back(j);
    } else {
      truth.partition.s3.push_back(j);
    }
  }
  for (Index j = 0; j < n_strong + n_weak; ++j)
    if (coin(rng)) truth.beta_star(j) = -truth.beta_star(j);

  Eigen::VectorXd y = X * truth.beta_star;
  for (Index i = 0; i < n; ++i) y(i) += sigma * normal(rng);

  return {center(X, y), std::move(truth)};
}

// ---------------------------------------------------------------------------
// Threshold regression design

Eigen::MatrixXd expand_threshold_design(const Eigen::MatrixXd& base_X, const ThresholdSpec& spec) {
  const Index n = base_X.rows(), k = base_X.cols();
  if (spec.q.size() != n)
    throw ConfigError("expand_threshold_design: threshold variable has " +
                      std::to_string(spec.q.size()) + " entries for " + std::to_string(n) +
                      " rows");
  if (!base_X.allFinite() || !spec.q.allFinite() || !std::isfinite(spec.tau))
    throw DataError("expand_threshold_design: non-finite input");

  Eigen::MatrixXd out(n, 2 * k + 2);
  for (Index i = 0; i < n; ++i) {
    const double ind = spec.q(i) < spec.tau ? 1.0 : 0.0;
    out(i, 0) = 1.0;
    out.block(i, 1, 1, k) = base_X.row(i);
    out(i, k + 1) = ind;
    out.block(i, k + 2, 1, k) = ind * base_X.row(i);
  }
  return out;
}

std::vector<std::string> expand_threshold_names(const std::vector<std::string>& base_names) {
  std::vector<std::string> out;
  out.reserve(2 * base_names.size() + 2);
  out.emplace_back("(intercept)");
  out.insert(out.end(), base_names.begin(), base_names.end());
  out.emplace_back("I(q<tau)");
  for (const auto& name : base_names) out.push_back("I(q<tau):" + name);
  return out;
}

}  // namespace postshrink
