#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Core>

namespace rmt {

/// SplitMix64 step. Advances `state` and returns the mixed output.
std::uint64_t splitmix64(std::uint64_t& state);

/// Counter-based seed derivation: the seed for (master, member, stream) depends
/// only on those three values, never on the order in which members are drawn.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t member, std::uint64_t stream = 0);

/// Random source with pinned variate algorithms.
///
/// The engine is std::mt19937_64 (its output sequence is fixed by the C++
/// standard). Uniforms take the top 53 bits; normals use the Marsaglia polar
/// method; gamma variates use Marsaglia-Tsang. None of the implementation-
/// defined std:: distributions are used, so streams are bit-identical across
/// standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on the open interval (0, 1).
  double uniform();

  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal();

  /// Gamma(shape, scale = 1), shape > 0.
  double gamma(double shape);

  double chi_square(double dof) { return 2.0 * gamma(0.5 * dof); }

  /// Fills `m` in storage (column-major) order with N(0, sigma^2) variates.
  void fill_normal(Eigen::Ref<Eigen::MatrixXd> m, double sigma = 1.0);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace rmt
