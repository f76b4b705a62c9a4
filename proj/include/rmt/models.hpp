#pragma once

#include <memory>
#include <string>

#include "rmt/linalg.hpp"

namespace rmt {

struct SpdRoots {
  Matrix sqrt;
  Matrix inv_sqrt;
  Vector spectrum;  // ascending eigenvalues of the input
};

/// Symmetric square root and inverse square root through the eigen-
/// decomposition, so both roots are symmetric. Throws NotPositiveDefinite
/// when the smallest eigenvalue is not above 1e-12 (absolute) and 1e-12
/// relative to the largest.
SpdRoots spd_sqrt(const Matrix& m);

/// Population correlation matrix xi: symmetric, unit diagonal, positive
/// definite. Holds xi^{1/2} and xi^{-1/2}. Immutable.
class CorrelationModel {
 public:
  /// Validates and factorizes `xi`. `name` is the fingerprint used in
  /// manifests, e.g. "exponential:c=0.9".
  CorrelationModel(Matrix xi, std::string name);

  const Matrix& xi() const { return xi_; }
  const Vector& spectrum() const { return roots_.spectrum; }
  const Matrix& sqrt() const { return roots_.sqrt; }
  const Matrix& inv_sqrt() const { return roots_.inv_sqrt; }
  const std::string& name() const { return name_; }
  Eigen::Index n() const { return xi_.rows(); }
  bool is_identity() const { return identity_; }

 private:
  Matrix xi_;
  SpdRoots roots_;
  std::string name_;
  bool identity_ = false;
};

CorrelationModel identity_model(Eigen::Index n);

/// xi_jk = delta_jk + (1 - delta_jk) c, 0 <= c < 1.
CorrelationModel equal_cross(Eigen::Index n, double c);

/// xi_jk = c^{|j-k|}, 0 <= c < 1.
CorrelationModel exponential(Eigen::Index n, double c);

/// Spectrum of equal_cross(n, c) in closed form: 1 - c (n - 1 times), then n c + 1 - c.
Vector equal_cross_spectrum(Eigen::Index n, double c);

/// Two-channel model: the (N+M)x(N+M) matrix [[xi_aa, xi_ab], [xi_ab^t, xi_bb]]
/// with eta = xi_aa^{-1/2} xi_ab xi_bb^{-1/2} and zeta = eta eta^t.
class PartitionedModel {
 public:
  PartitionedModel(CorrelationModel xi_aa, CorrelationModel xi_bb, Matrix xi_ab, std::string name = "partitioned");

  const CorrelationModel& xi_aa() const { return aa_; }
  const CorrelationModel& xi_bb() const { return bb_; }
  const Matrix& xi_ab() const { return ab_; }
  const Matrix& eta() const { return eta_; }
  const Matrix& zeta() const { return zeta_; }
  const Vector& zeta_spectrum() const { return zeta_spectrum_; }
  /// Canonical correlations: sqrt of the zeta spectrum, ascending.
  Vector canonical_correlations() const;
  /// Symmetric root of the assembled (N+M)x(N+M) matrix.
  const Matrix& full_sqrt() const { return full_sqrt_; }
  /// Smallest eigenvalue of the assembled matrix.
  double full_min_eigenvalue() const { return full_min_eig_; }
  Eigen::Index n() const { return aa_.n(); }
  Eigen::Index m() const { return bb_.n(); }
  const std::string& name() const { return name_; }
  /// True when both diagonal blocks are identities and xi_ab vanishes.
  bool is_null() const { return null_; }

 private:
  CorrelationModel aa_;
  CorrelationModel bb_;
  Matrix ab_;
  Matrix eta_;
  Matrix zeta_;
  Vector zeta_spectrum_;
  Matrix full_sqrt_;
  double full_min_eig_ = 0.0;
  std::string name_;
  bool null_ = false;
};

/// Assembles [[aa, ab], [ab^t, bb]].
Matrix assemble_partitioned(const Matrix& aa, const Matrix& bb, const Matrix& ab);

/// [xi_ab]_jr = c for all j, r (rank one).
Matrix rank_one_cross(Eigen::Index n, Eigen::Index m, double c);

/// [xi_ab]_jr = c delta_jr + (1 - delta_jr) c^{|j-r|}.
Matrix banded_cross(Eigen::Index n, Eigen::Index m, double c);

/// Equal-cross diagonal blocks (coefficients a, b) with a rank-one cross block c.
PartitionedModel rank_one_model(Eigen::Index n, Eigen::Index m, double a, double b, double c);

/// Equal-cross diagonal blocks (a, b) with the banded cross block c.
PartitionedModel banded_model(Eigen::Index n, Eigen::Index m, double a, double b, double c);

/// xi = identity, xi_ab = 0.
PartitionedModel null_model(Eigen::Index n, Eigen::Index m);

}  // namespace rmt
