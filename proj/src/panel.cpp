#include "rmt/panel.hpp"

#include <cmath>
#include <fstream>
#include <string>
#include <unordered_set>

#include "rmt/error.hpp"
#include "rmt/io.hpp"

namespace rmt {

namespace {

std::vector<std::string> default_labels(Eigen::Index n) {
  std::vector<std::string> labels;
  labels.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) labels.push_back("v" + std::to_string(i));
  return labels;
}

}  // namespace

DataPanel::DataPanel(Matrix values, std::vector<std::string> labels, double dt)
    : values_(std::move(values)), labels_(std::move(labels)), dt_(dt) {
  if (values_.rows() < 1 || values_.cols() < 2)
    throw Error(Errc::TooShort, "panel needs N >= 1 and T >= 2, got " + std::to_string(values_.rows()) +
                                    "x" + std::to_string(values_.cols()));
  if (!values_.allFinite()) throw Error(Errc::ParseError, "panel contains non-finite entries");
  if (static_cast<Eigen::Index>(labels_.size()) != values_.rows())
    throw Error(Errc::DimensionMismatch, "expected " + std::to_string(values_.rows()) + " labels, got " +
                                             std::to_string(labels_.size()));
  std::unordered_set<std::string> seen;
  for (const auto& l : labels_)
    if (!seen.insert(l).second) throw Error(Errc::ParseError, "duplicate label '" + l + "'");
  if (!(dt_ > 0.0) || !std::isfinite(dt_)) throw Error(Errc::BadParameters, "dt must be positive");
}

DataPanel::DataPanel(Matrix values) : DataPanel(values, default_labels(values.rows())) {}

Matrix log_returns(const Matrix& prices) {
  if (prices.cols() < 2)
    throw Error(Errc::TooShort, "need at least 2 price observations, got " + std::to_string(prices.cols()));
  for (Eigen::Index j = 0; j < prices.cols(); ++j)
    for (Eigen::Index i = 0; i < prices.rows(); ++i)
      if (!(prices(i, j) > 0.0))
        throw Error(Errc::NonPositivePrice, "row " + std::to_string(i) + ", col " + std::to_string(j));
  Matrix out(prices.rows(), prices.cols() - 1);
  for (Eigen::Index j = 0; j + 1 < prices.cols(); ++j)
    for (Eigen::Index i = 0; i < prices.rows(); ++i)
      out(i, j) = std::log(prices(i, j + 1)) - std::log(prices(i, j));
  return out;
}

StandardizedPanel standardize(const DataPanel& panel) {
  const Matrix& x = panel.values();
  const auto t = static_cast<double>(x.cols());
  StandardizedPanel out;
  out.means = x.rowwise().mean();
  out.values = x.colwise() - out.means;
  out.stds = (out.values.rowwise().squaredNorm() / t).cwiseSqrt();
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    // A row whose spread is at rounding level of its magnitude is constant.
    const double scale = std::max(1.0, std::abs(out.means(i)));
    if (!(out.stds(i) > 1e-14 * scale)) throw Error(Errc::ZeroVariance, "row " + std::to_string(i));
    out.values.row(i) /= out.stds(i);
  }
  return out;
}

SampleCorrelation correlation_matrix(const StandardizedPanel& std_panel) {
  SampleCorrelation c;
  c.matrix = scaled_gram(std_panel.values, 1.0 / static_cast<double>(std_panel.t()));
  c.horizon = std_panel.t();
  c.lag = 0;
  c.symmetric = true;
  return c;
}

SampleCorrelation lagged_correlation(const StandardizedPanel& a, const StandardizedPanel& b,
                                     Eigen::Index lag) {
  if (a.t() != b.t())
    throw Error(Errc::DimensionMismatch,
                "panels have T=" + std::to_string(a.t()) + " and T=" + std::to_string(b.t()));
  if (lag < 0) throw Error(Errc::BadParameters, "lag must be non-negative");
  if (lag >= a.t())
    throw Error(Errc::LagTooLarge, "lag " + std::to_string(lag) + " >= T=" + std::to_string(a.t()));
  const Eigen::Index overlap = a.t() - lag;
  SampleCorrelation c;
  c.matrix = a.values.leftCols(overlap) * b.values.middleCols(lag, overlap).transpose() /
             static_cast<double>(overlap);
  c.horizon = a.t();
  c.lag = lag;
  c.symmetric = lag == 0 && a.values.rows() == b.values.rows() && a.values == b.values;
  return c;
}

DataPanel read_panel_csv(std::istream& in, const CsvLayout& layout) {
  std::vector<std::vector<std::string>> records;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    records.push_back(io::split_csv_line(line));
  }
  if (records.empty()) throw Error(Errc::ParseError, "empty CSV");

  std::vector<std::string> labels;
  Matrix values;
  if (layout.transposed) {
    const std::size_t width = records.front().size();
    if (width < 3) throw Error(Errc::TooShort, "each row needs a label and at least 2 values");
    values.resize(static_cast<Eigen::Index>(records.size()), static_cast<Eigen::Index>(width - 1));
    for (std::size_t r = 0; r < records.size(); ++r) {
      if (records[r].size() != width)
        throw Error(Errc::DimensionMismatch, "row " + std::to_string(r + 1) + " has " +
                                                 std::to_string(records[r].size()) + " fields, expected " +
                                                 std::to_string(width));
      labels.push_back(records[r][0]);
      for (std::size_t k = 1; k < width; ++k)
        values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(k - 1)) =
            io::parse_double(records[r][k], "row " + std::to_string(r + 1) + " field " + std::to_string(k + 1));
    }
  } else {
    const std::size_t skip = layout.skip_first_column ? 1 : 0;
    const auto& header = records.front();
    if (header.size() <= skip) throw Error(Errc::ParseError, "header has no variable columns");
    labels.assign(header.begin() + static_cast<std::ptrdiff_t>(skip), header.end());
    const std::size_t n = labels.size();
    const std::size_t t = records.size() - 1;
    values.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(t));
    for (std::size_t r = 1; r < records.size(); ++r) {
      if (records[r].size() != header.size())
        throw Error(Errc::DimensionMismatch, "line " + std::to_string(r + 1) + " has " +
                                                 std::to_string(records[r].size()) + " fields, expected " +
                                                 std::to_string(header.size()));
      for (std::size_t k = 0; k < n; ++k)
        values(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(r - 1)) = io::parse_double(
            records[r][k + skip], "line " + std::to_string(r + 1) + " column '" + labels[k] + "'");
    }
  }
  return DataPanel(std::move(values), std::move(labels));
}

DataPanel read_panel_csv(const std::string& path, const CsvLayout& layout) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::ParseError, "cannot open " + path);
  return read_panel_csv(in, layout);
}

}  // namespace rmt
