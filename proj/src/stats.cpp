#include "rmt/stats.hpp"

#include <algorithm>
#include <cmath>

#include "rmt/error.hpp"

namespace rmt {

Histogram histogram(const std::vector<double>& values, double lo, double hi, int bins, double total) {
  if (bins < 1 || !(hi > lo)) throw Error(Errc::BadParameters, "histogram needs hi > lo and bins >= 1");
  Histogram h;
  h.lo = lo;
  h.hi = hi;
  h.counts.assign(static_cast<std::size_t>(bins), 0.0);
  const double w = (hi - lo) / bins;
  for (double v : values) {
    if (!(v >= lo && v <= hi)) continue;
    const int i = std::min(bins - 1, static_cast<int>((v - lo) / w));
    h.counts[static_cast<std::size_t>(i)] += 1.0;
  }
  const double norm = total > 0.0 ? total : static_cast<double>(values.size());
  h.density.resize(h.counts.size());
  for (std::size_t i = 0; i < h.counts.size(); ++i) h.density[i] = h.counts[i] / (norm * w);
  return h;
}

double l1_distance(const Histogram& h, const std::function<double(double)>& density, int sub) {
  const double w = h.width();
  double d = 0.0;
  for (int i = 0; i < h.bins(); ++i) {
    double avg = 0.0;
    for (int k = 0; k < sub; ++k) avg += density(h.lo + (i + (k + 0.5) / sub) * w);
    avg /= sub;
    d += std::abs(h.density[static_cast<std::size_t>(i)] - avg) * w;
  }
  return d;
}

double l1_distance_cumulative(const Histogram& h, const std::function<double(double)>& cdf) {
  const double w = h.width();
  double d = 0.0, left = cdf(h.lo);
  for (int i = 0; i < h.bins(); ++i) {
    const double right = cdf(h.lo + (i + 1) * w);
    d += std::abs(h.density[static_cast<std::size_t>(i)] * w - (right - left));
    left = right;
  }
  return d;
}

Moments sample_moments(const std::vector<double>& values) {
  Moments m;
  const double n = static_cast<double>(values.size());
  if (values.empty()) return m;
  for (double v : values) m.mean += v;
  m.mean /= n;
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double v : values) {
    const double d = v - m.mean;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  m.variance = values.size() > 1 ? m2 * n / (n - 1.0) : 0.0;
  if (m2 > 0.0) {
    m.skewness = m3 / std::pow(m2, 1.5);
    m.excess_kurtosis = m4 / (m2 * m2) - 3.0;
  }
  return m;
}

double quantile(std::vector<double> values, double p) {
  if (values.empty()) throw Error(Errc::BadParameters, "quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const double pos = std::clamp(p, 0.0, 1.0) * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(values.size() - 1, lo + 1);
  const double t = pos - static_cast<double>(lo);
  return (1.0 - t) * values[lo] + t * values[hi];
}

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw Error(Errc::BadParameters, "fit needs >= 2 paired points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LinearFit f;
  f.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  f.intercept = my - f.slope * mx;
  f.r2 = sxx > 0.0 && syy > 0.0 ? sxy * sxy / (sxx * syy) : 0.0;
  return f;
}

}  // namespace rmt
