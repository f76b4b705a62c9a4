#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "rmt/linalg.hpp"
#include "rmt/models.hpp"

namespace rmt {

enum class EnsembleKind { Woe, Cwoe, TwoChannel };

/// How two-channel members are drawn.
///
/// Literal: W = xi^{1/2} Z for white (N+M) x T data Z, the blocks are split off
/// and decorrelated with xi_aa^{-1/2}, xi_bb^{-1/2}; C = A B^t B A^t / T^2.
///
/// Canonical: draws the same eigenvalue distribution in O(N^2 M) work
/// independent of T. Rotating A and B onto the singular vectors of eta leaves
/// the spectrum unchanged; in those coordinates a a^t is Wishart (Bartlett
/// factor L), a z^t = L G for independent white z, so
/// a b^t = L [L^t S + G1 sqrt(1 - S^2), G2] with S the canonical correlations.
enum class TwoChannelMethod { Literal, Canonical };

std::string to_string(EnsembleKind kind);
std::string to_string(TwoChannelMethod method);

struct EnsembleConfig {
  EnsembleKind kind = EnsembleKind::Woe;
  Eigen::Index n = 0;
  Eigen::Index t = 0;
  Eigen::Index m = 0;  // two-channel only
  double sigma = 1.0;
  std::shared_ptr<const CorrelationModel> model;        // CWOE
  std::shared_ptr<const PartitionedModel> partitioned;  // two-channel
  int members = 1;
  std::uint64_t seed = 0;
  TwoChannelMethod method = TwoChannelMethod::Literal;

  double kappa() const { return static_cast<double>(t) / static_cast<double>(n); }
  double kappa_n() const { return static_cast<double>(n) / static_cast<double>(t); }
  double kappa_m() const { return static_cast<double>(m) / static_cast<double>(t); }

  /// Throws BadDimensions / DimensionMismatch / BadParameters.
  void validate() const;

  /// Stable one-line description of every field that affects the samples.
  std::string fingerprint() const;
};

struct SpectrumResult {
  Vector eigenvalues;  // ascending
  std::string fingerprint;
  int member = 0;
};

/// C = A A^t / T with A_ij ~ N(0, sigma^2).
Matrix sample_woe(const EnsembleConfig& config, int member);

/// C = xi^{1/2} B B^t xi^{1/2} / T. With xi = identity this is bit-identical to
/// sample_woe for the same (seed, member).
Matrix sample_cwoe(const EnsembleConfig& config, int member);

/// C = A B^t B A^t / T^2 for the decorrelated channels A, B.
Matrix sample_two_channel(const EnsembleConfig& config, int member);

/// Dispatches on config.kind.
Matrix sample_member(const EnsembleConfig& config, int member);

SpectrumResult sample_spectrum(const EnsembleConfig& config, int member);

/// All members, ordered by member index regardless of `workers`.
std::vector<SpectrumResult> sample_spectra(const EnsembleConfig& config, int workers = 1);

/// Monte Carlo check of the exact binary-correlation identities for a
/// Gaussian N x T matrix B with variance sigma^2 (<X>_K = tr X / K):
///   1: (1/T) <B Phi B^t Psi>_N = sigma^2 <Phi>_T <Psi>_N      Phi TxT, Psi NxN
///   2: <B Phi B Psi>_N = sigma^2 <Phi^t Psi>_N                Phi TxN, Psi TxN
///   3: <B Phi>_N <Psi B^t>_N = (sigma^2/N) <Psi Phi>_N         Phi TxN, Psi NxT
///   4: <B Phi>_N <B Psi>_N = (sigma^2/N) <Psi^t Phi>_N         Phi TxN, Psi TxN
struct IdentityCheck {
  double estimate = 0.0;
  double analytic = 0.0;
  double standard_error = 0.0;
};

/// Uses config.n, config.t, config.sigma, config.members and config.seed.
IdentityCheck verify_identity(int which, const Matrix& phi, const Matrix& psi, const EnsembleConfig& config);

}  // namespace rmt
