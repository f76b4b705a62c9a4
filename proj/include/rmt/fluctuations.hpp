#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "rmt/linalg.hpp"
#include "rmt/pastur.hpp"

namespace rmt {

/// Integrated density: a piecewise-linear continuous part plus point masses.
class CumulativeDensity {
 public:
  CumulativeDensity(Vector x, Vector continuous, std::vector<DeltaComponent> atoms);

  /// Fraction of eigenvalues at or below `lambda`.
  double operator()(double lambda) const;

  /// Smallest lambda with (*this)(lambda) >= p, by bisection.
  double quantile(double p) const;

  double total() const;

 private:
  Vector x_;
  Vector cont_;
  std::vector<DeltaComponent> atoms_;
};

/// Cumulative trapezoid of rho; `zero_mode_weight` adds an atom at 0.
/// Throws NonMonotoneDensityIntegral if rho is materially negative.
CumulativeDensity cumulative_density(const ResolventSolution& solution, double zero_mode_weight = 0.0);

/// Closed-form density on a cosine-clustered grid of `points` nodes.
CumulativeDensity cumulative_density(const DensityPrediction& prediction, int points = 4001);

struct UnfoldedSpectrum {
  std::vector<double> values;  // ascending
  double window_lo = 0.0;      // original units
  double window_hi = 0.0;
  double unfolded_lo = 0.0;    // window edges after unfolding
  double unfolded_hi = 0.0;

  double mean_spacing() const;
  /// Mean spacing in [0.9, 1.1].
  bool quality_ok() const { return std::abs(mean_spacing() - 1.0) <= 0.1; }
};

/// lambda -> n * cdf(lambda) for the eigenvalues inside [lo, hi].
/// n defaults to the number of eigenvalues. Throws EmptyWindow below 2 levels.
UnfoldedSpectrum unfold(const Vector& eigenvalues, const CumulativeDensity& cdf, double lo, double hi,
                        double n = 0.0);

struct NumberVarianceCurve {
  std::vector<double> r;
  std::vector<double> sigma2;
  std::vector<double> standard_error;
  std::vector<double> goe;
  double window_lo = 0.0;
  double window_hi = 0.0;
};

struct NumberVarianceOptions {
  int bootstrap = 200;
  std::uint64_t seed = 0x5eed;
};

/// Variance of the level count in intervals of unfolded length r. Intervals
/// slide in steps of r/2 across each spectrum's unfolded window; counts from
/// all members are pooled. Standard errors by member-level bootstrap.
/// Throws WindowTooNarrow if a spectrum cannot hold one interval of length r.
NumberVarianceCurve number_variance(const std::vector<UnfoldedSpectrum>& spectra, const std::vector<double>& r,
                                    const NumberVarianceOptions& options = {});

/// (2/pi^2)(ln(2 pi r) + gamma + 1 - pi^2/8) for r >= 1, linear to 0 below.
double goe_number_variance(double r);

/// -1/(pi^2 r^2). Throws DomainError for r <= 0.
double universal_two_point(double r);

struct UniversalityCheck {
  double lhs = 0.0;  // 2 pi rho^2 N
  double rhs = 0.0;  // |((1 - kappa)/lambda^2 - dP/dlambda) r|
  bool universal = false;
};

/// Throws OutsideSupport when lambda is off the grid or rho(lambda) is below
/// 1e-4 of the peak density.
UniversalityCheck universality_check(const ResolventSolution& solution, double kappa, double n, double lambda,
                                     double r, double factor = 10.0);

}  // namespace rmt
