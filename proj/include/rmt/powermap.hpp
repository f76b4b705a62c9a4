#pragma once

#include <string>
#include <vector>

#include "rmt/linalg.hpp"

namespace rmt {

/// Correlation: entries must lie in [-1, 1] (1e-12 slack). None: any finite
/// entries, e.g. raw Wishart matrices whose diagonal fluctuates around 1.
enum class RangeCheck { Correlation, None };

struct PowerMapped {
  Matrix matrix;
  double q = 1.0;
  double alpha = 0.0;
};

/// out_kl = sign(c_kl) |c_kl|^q. Throws BadExponent (q < 1) or EntryOutOfRange.
PowerMapped power_map(const Matrix& c, double q, RangeCheck check = RangeCheck::Correlation);

struct EmergingSpectrum {
  Vector base;              // eigenvalues of C, ascending
  Vector mapped;            // eigenvalues of C^(1+alpha), ascending, unclamped
  Vector delta_lambdas;     // (mapped - base) / alpha, paired by sorted order
  Vector emerging;          // first N - T entries of delta_lambdas (T < N)
  Vector bulk_corrections;  // the rest
  Eigen::Index zero_modes = 0;
  std::vector<std::string> warnings;  // "NotSingular" when T >= N
};

EmergingSpectrum emerging_spectrum(const Matrix& c, Eigen::Index t, double alpha,
                                   RangeCheck check = RangeCheck::Correlation);

/// Moments of one member: m_n = (1/N) sum (lambda_j(alpha) - lambda_j)^n,
/// split into the zero-mode part (j < N - T) and the rest.
struct MomentSample {
  double m1 = 0.0, m2 = 0.0;
  double m01 = 0.0, m02 = 0.0;
  double m11 = 0.0, m12 = 0.0;
  double trace_m1 = 0.0;  // (Tr C^(alpha) - Tr C) / N
};

MomentSample member_moments(const Matrix& c, Eigen::Index t, double alpha,
                            RangeCheck check = RangeCheck::Correlation);

struct MomentSet {
  double m1 = 0.0, m2 = 0.0;
  double m01 = 0.0, m02 = 0.0;
  double m11 = 0.0, m12 = 0.0;
};

struct PowerMapReport {
  MomentSet measured;
  MomentSet theory;
  double measured_trace_m1 = 0.0;
  double s = 0.0;        // scaling parameter (theory)
  double r_shift = 0.0;  // shifting parameter (theory)
  double s_measured = 0.0;
  double r_measured = 0.0;
  double alpha = 0.0;
  Eigen::Index n = 0;
  Eigen::Index t = 0;
  double kappa = 0.0;
  double c = 0.0;
  int members = 0;
  std::vector<std::string> warnings;
};

/// gamma + ln 2 - 2 and pi^2/2 - 4.
double powermap_c1();
double powermap_c2();

/// -(alpha/2) sqrt((ln T + c1)^2 + c2).
double scaling_parameter(double alpha, double t);

/// Linear-response theory for WOE (c = 0) or equal-cross CWOE (c > 0).
MomentSet theory_moments(Eigen::Index n, Eigen::Index t, double alpha, double c = 0.0);

/// Averages the member samples and attaches the theory. Adds an
/// "AlphaTooLarge" warning when measured m1 or m2 is off theory by > 20%.
PowerMapReport moment_report(const std::vector<MomentSample>& samples, Eigen::Index n, Eigen::Index t,
                             double alpha, double c = 0.0);

}  // namespace rmt
