#pragma once

#include <functional>
#include <vector>

#include "rmt/linalg.hpp"

namespace rmt {

struct Histogram {
  double lo = 0.0;
  double hi = 0.0;
  std::vector<double> counts;
  std::vector<double> density;  // counts / (total * width)

  int bins() const { return static_cast<int>(counts.size()); }
  double width() const { return (hi - lo) / bins(); }
  double center(int i) const { return lo + (i + 0.5) * width(); }
};

/// Values outside [lo, hi] are dropped but still count toward `total`
/// (total <= 0 means the number of values supplied).
Histogram histogram(const std::vector<double>& values, double lo, double hi, int bins, double total = 0.0);

/// sum_i |h_i - <rho>_i| width, with <rho>_i the bin average of `density`
/// over `sub` midpoint samples.
double l1_distance(const Histogram& h, const std::function<double(double)>& density, int sub = 16);

/// Same distance with exact bin masses cdf(b) - cdf(a) from a cumulative density.
double l1_distance_cumulative(const Histogram& h, const std::function<double(double)>& cdf);

struct Moments {
  double mean = 0.0;
  double variance = 0.0;  // unbiased
  double skewness = 0.0;
  double excess_kurtosis = 0.0;
};

Moments sample_moments(const std::vector<double>& values);

/// Linear interpolation between order statistics.
double quantile(std::vector<double> values, double p);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace rmt
