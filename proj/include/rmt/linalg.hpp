#pragma once

#include <cstddef>
#include <functional>

#include <Eigen/Dense>

namespace rmt {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Ascending eigenvalues of a symmetric matrix (only the lower triangle is read).
Vector symmetric_eigenvalues(const Matrix& m);

struct SymmetricEigen {
  Vector values;   // ascending
  Matrix vectors;  // columns match `values`
};

SymmetricEigen symmetric_eigen(const Matrix& m);

/// scale * a * a^T as a full symmetric matrix.
Matrix scaled_gram(const Matrix& a, double scale);

/// max |m(i,j) - m(j,i)|
double max_asymmetry(const Matrix& m);

/// Relative Frobenius distance ||a - b|| / ||b||.
double relative_frobenius(const Matrix& a, const Matrix& b);

/// Runs body(i) for i in [0, count) on `workers` threads. Work is handed out
/// through a shared counter; callers store results by index so the outcome
/// never depends on scheduling. workers <= 1 runs inline.
void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& body);

}  // namespace rmt
