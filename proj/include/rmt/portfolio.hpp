#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rmt/linalg.hpp"
#include "rmt/panel.hpp"

namespace rmt {

struct MarketSpec {
  int blocks = 5;
  int block_size = 20;
  double rho_in = 0.6;
  double rho_out = 0.2;
  double sigma_lo = 0.1;
  double sigma_hi = 0.4;
  std::uint64_t seed = 20120901;  // fixes the sigma draw
};

/// Sigma0 = diag(sigmas) C0 diag(sigmas).
class MarketModel {
 public:
  /// Validates C0 (square, symmetric, unit diagonal, positive definite) and sigmas > 0.
  MarketModel(Matrix c0, Vector sigmas);

  const Matrix& c0() const { return c0_; }
  const Vector& sigmas() const { return sigmas_; }
  const Matrix& sigma0() const { return sigma0_; }
  const Matrix& c0_sqrt() const { return c0_sqrt_; }
  Eigen::Index n() const { return c0_.rows(); }

 private:
  Matrix c0_;
  Vector sigmas_;
  Matrix sigma0_;
  Matrix c0_sqrt_;
};

/// Block model: rho_in inside blocks, rho_out between them, sigma_k uniform
/// in [sigma_lo, sigma_hi) from spec.seed.
MarketModel make_market(const MarketSpec& spec = {});

/// w = Sigma^{-1} e / (e^t Sigma^{-1} e). Throws SingularCovariance when the
/// condition number reaches 1e12.
Vector min_variance_weights(const Matrix& sigma);

/// Returns R = diag(sigma) C0^{1/2} Z for N x T standard Gaussian Z.
DataPanel simulate_market(const MarketModel& model, Eigen::Index t, std::uint64_t seed);

/// sigma_k sigma_l C^(q)_kl from the population standard deviations and the
/// power-mapped sample correlation. q = 1 is the sample covariance.
Matrix estimate_covariance(const DataPanel& returns, double q);

struct PortfolioOutcome {
  Vector weights;
  double omega2 = 0.0;    // w^t Sigma0 w
  double omega0_2 = 0.0;  // 1 / (e^t Sigma0^{-1} e)
  double ratio = 0.0;
};

PortfolioOutcome evaluate_portfolio(const Vector& weights, const MarketModel& model);

/// Omega^2 / Omega0^2 of the equal-weight portfolio.
double homogeneous_ratio(const MarketModel& model);

struct StudyPoint {
  Eigen::Index t = 0;
  double q = 1.0;
  int member = 0;
  double ratio = 0.0;  // NaN when the estimate was singular
  std::string estimator;  // "sample" (q = 1) or "powermap"
};

struct StudySummary {
  Eigen::Index t = 0;
  double q = 1.0;
  std::string estimator;
  double median = 0.0;
  double lower_quartile = 0.0;
  double upper_quartile = 0.0;
  double mean = 0.0;
  int valid = 0;
  int missing = 0;
};

struct StudyResult {
  std::vector<StudyPoint> points;
  std::vector<StudySummary> summary;
  double homogeneous = 0.0;
};

/// One simulated return panel per (T, member) is shared by all q values.
StudyResult run_study(const MarketModel& model, const std::vector<Eigen::Index>& t_values,
                      const std::vector<double>& q_values, int members, std::uint64_t seed, int workers = 1);

}  // namespace rmt
