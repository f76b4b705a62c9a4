#include "rmt/models.hpp"

#include <cmath>
#include <sstream>

#include "rmt/error.hpp"

namespace rmt {

namespace {

std::string describe(const std::string& kind, double c) {
  std::ostringstream os;
  os << kind << ":c=" << c;
  return os.str();
}

void check_coefficient(double c) {
  if (!(c >= 0.0 && c < 1.0)) {
    std::ostringstream os;
    os << "coefficient " << c << " outside [0, 1)";
    throw Error(Errc::BadCoefficient, os.str());
  }
}

Matrix root_from(const SymmetricEigen& eig, double power) {
  const Vector d = eig.values.array().pow(power);
  Matrix out = eig.vectors * d.asDiagonal() * eig.vectors.transpose();
  return 0.5 * (out + out.transpose());
}

}  // namespace

SpdRoots spd_sqrt(const Matrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0) throw Error(Errc::DimensionMismatch, "matrix must be square");
  const auto eig = symmetric_eigen(m);
  const double lo = eig.values(0);
  const double hi = eig.values(eig.values.size() - 1);
  if (!(lo > 1e-12) || !(lo > 1e-12 * hi)) {
    std::ostringstream os;
    os << "smallest eigenvalue " << lo << " (largest " << hi << ")";
    throw Error(Errc::NotPositiveDefinite, os.str());
  }
  return {root_from(eig, 0.5), root_from(eig, -0.5), eig.values};
}

CorrelationModel::CorrelationModel(Matrix xi, std::string name) : xi_(std::move(xi)), name_(std::move(name)) {
  if (xi_.rows() != xi_.cols() || xi_.rows() == 0)
    throw Error(Errc::DimensionMismatch, "correlation model must be square and non-empty");
  if (max_asymmetry(xi_) > 1e-12) throw Error(Errc::BadParameters, "correlation model is not symmetric");
  for (Eigen::Index i = 0; i < xi_.rows(); ++i)
    if (std::abs(xi_(i, i) - 1.0) > 1e-12)
      throw Error(Errc::BadParameters, "diagonal entry " + std::to_string(i) + " is not 1");
  identity_ = xi_.isIdentity(0.0);
  if (identity_) {
    const Eigen::Index n = xi_.rows();
    roots_ = {Matrix::Identity(n, n), Matrix::Identity(n, n), Vector::Ones(n)};
  } else {
    roots_ = spd_sqrt(xi_);
  }
}

CorrelationModel identity_model(Eigen::Index n) { return CorrelationModel(Matrix::Identity(n, n), "identity"); }

CorrelationModel equal_cross(Eigen::Index n, double c) {
  check_coefficient(c);
  Matrix xi = Matrix::Constant(n, n, c);
  xi.diagonal().setOnes();
  return CorrelationModel(std::move(xi), describe("equal_cross", c));
}

CorrelationModel exponential(Eigen::Index n, double c) {
  check_coefficient(c);
  Matrix xi(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index k = 0; k < n; ++k) xi(j, k) = std::pow(c, static_cast<double>(std::abs(j - k)));
  return CorrelationModel(std::move(xi), describe("exponential", c));
}

Vector equal_cross_spectrum(Eigen::Index n, double c) {
  Vector s = Vector::Constant(n, 1.0 - c);
  s(n - 1) = static_cast<double>(n) * c + 1.0 - c;
  return s;
}

Matrix assemble_partitioned(const Matrix& aa, const Matrix& bb, const Matrix& ab) {
  const Eigen::Index n = aa.rows();
  const Eigen::Index m = bb.rows();
  Matrix full(n + m, n + m);
  full.topLeftCorner(n, n) = aa;
  full.bottomRightCorner(m, m) = bb;
  full.topRightCorner(n, m) = ab;
  full.bottomLeftCorner(m, n) = ab.transpose();
  return full;
}

PartitionedModel::PartitionedModel(CorrelationModel xi_aa, CorrelationModel xi_bb, Matrix xi_ab, std::string name)
    : aa_(std::move(xi_aa)), bb_(std::move(xi_bb)), ab_(std::move(xi_ab)), name_(std::move(name)) {
  const Eigen::Index n = aa_.n();
  const Eigen::Index m = bb_.n();
  if (ab_.rows() != n || ab_.cols() != m)
    throw Error(Errc::DimensionMismatch, "xi_ab is " + std::to_string(ab_.rows()) + "x" +
                                             std::to_string(ab_.cols()) + ", expected " + std::to_string(n) +
                                             "x" + std::to_string(m));
  if (m < n) throw Error(Errc::BadDimensions, "two-channel model needs M >= N");

  null_ = aa_.is_identity() && bb_.is_identity() && ab_.isZero(0.0);
  if (null_) {
    full_sqrt_ = Matrix::Identity(n + m, n + m);
    full_min_eig_ = 1.0;
  } else {
    const auto eig = symmetric_eigen(assemble_partitioned(aa_.xi(), bb_.xi(), ab_));
    full_min_eig_ = eig.values(0);
    const double hi = eig.values(eig.values.size() - 1);
    if (!(full_min_eig_ > 1e-12 * hi)) {
      std::ostringstream os;
      os << "assembled matrix has smallest eigenvalue " << full_min_eig_;
      throw Error(Errc::NotPositiveDefinite, os.str());
    }
    full_sqrt_ = root_from(eig, 0.5);
  }
  eta_ = aa_.inv_sqrt() * ab_ * bb_.inv_sqrt();
  zeta_ = eta_ * eta_.transpose();
  zeta_ = 0.5 * (zeta_ + zeta_.transpose());
  zeta_spectrum_ = symmetric_eigenvalues(zeta_);
}

Vector PartitionedModel::canonical_correlations() const {
  return zeta_spectrum_.cwiseMax(0.0).cwiseMin(1.0).cwiseSqrt();
}

Matrix rank_one_cross(Eigen::Index n, Eigen::Index m, double c) { return Matrix::Constant(n, m, c); }

Matrix banded_cross(Eigen::Index n, Eigen::Index m, double c) {
  Matrix ab(n, m);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index r = 0; r < m; ++r)
      ab(j, r) = j == r ? c : std::pow(c, static_cast<double>(std::abs(j - r)));
  return ab;
}

namespace {

std::string partitioned_name(const char* cross, double a, double b, double c) {
  std::ostringstream os;
  os << "partitioned:cross=" << cross << ",a=" << a << ",b=" << b << ",c=" << c;
  return os.str();
}

}  // namespace

PartitionedModel rank_one_model(Eigen::Index n, Eigen::Index m, double a, double b, double c) {
  check_coefficient(c);
  return PartitionedModel(equal_cross(n, a), equal_cross(m, b), rank_one_cross(n, m, c),
                          partitioned_name("rank_one", a, b, c));
}

PartitionedModel banded_model(Eigen::Index n, Eigen::Index m, double a, double b, double c) {
  check_coefficient(c);
  return PartitionedModel(equal_cross(n, a), equal_cross(m, b), banded_cross(n, m, c),
                          partitioned_name("banded", a, b, c));
}

PartitionedModel null_model(Eigen::Index n, Eigen::Index m) {
  return PartitionedModel(identity_model(n), identity_model(m), Matrix::Zero(n, m), "partitioned:null");
}

}  // namespace rmt
