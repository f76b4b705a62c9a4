#pragma once

#include <istream>
#include <string>
#include <vector>

#include "rmt/linalg.hpp"

namespace rmt {

/// N x T observation matrix; rows are variables, columns are time steps.
class DataPanel {
 public:
  DataPanel(Matrix values, std::vector<std::string> labels, double dt = 1.0);

  /// Labels default to "v0", "v1", ...
  explicit DataPanel(Matrix values);

  const Matrix& values() const { return values_; }
  const std::vector<std::string>& labels() const { return labels_; }
  double dt() const { return dt_; }
  Eigen::Index n() const { return values_.rows(); }
  Eigen::Index t() const { return values_.cols(); }

 private:
  Matrix values_;
  std::vector<std::string> labels_;
  double dt_;
};

/// Rows shifted to mean 0 and scaled to population standard deviation 1.
struct StandardizedPanel {
  Matrix values;
  Vector means;
  Vector stds;

  Eigen::Index n() const { return values.rows(); }
  Eigen::Index t() const { return values.cols(); }
};

struct SampleCorrelation {
  Matrix matrix;
  Eigen::Index horizon = 0;
  Eigen::Index lag = 0;
  bool symmetric = true;
};

/// out(j, tau) = ln p(j, tau + 1) - ln p(j, tau)
Matrix log_returns(const Matrix& prices);

StandardizedPanel standardize(const DataPanel& panel);

/// C = A A^t / T.
SampleCorrelation correlation_matrix(const StandardizedPanel& std_panel);

/// C_jk(lag) = (1 / (T - lag)) sum_{tau < T - lag} A(j, tau) B(k, tau + lag).
/// The average runs over the overlap window only.
SampleCorrelation lagged_correlation(const StandardizedPanel& a, const StandardizedPanel& b,
                                     Eigen::Index lag);

struct CsvLayout {
  /// false: header row holds the labels and every following row is one time
  /// step. true: every row is one variable, "label,x0,x1,...", no header.
  bool transposed = false;
  /// Skip the first column (a date or index column) in the column layout.
  bool skip_first_column = false;
};

DataPanel read_panel_csv(std::istream& in, const CsvLayout& layout = {});
DataPanel read_panel_csv(const std::string& path, const CsvLayout& layout = {});

}  // namespace rmt
