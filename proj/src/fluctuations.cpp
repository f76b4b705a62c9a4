#include "rmt/fluctuations.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rmt/error.hpp"
#include "rmt/rng.hpp"

namespace rmt {

namespace {

constexpr double kPi = std::numbers::pi;

double interpolate(const Vector& x, const Vector& y, double at) {
  const Eigen::Index n = x.size();
  if (at <= x(0)) return y(0);
  if (at >= x(n - 1)) return y(n - 1);
  const auto* it = std::upper_bound(x.data(), x.data() + n, at);
  const Eigen::Index hi = it - x.data();
  const Eigen::Index lo = hi - 1;
  const double t = (at - x(lo)) / (x(hi) - x(lo));
  return (1.0 - t) * y(lo) + t * y(hi);
}

}  // namespace

CumulativeDensity::CumulativeDensity(Vector x, Vector continuous, std::vector<DeltaComponent> atoms)
    : x_(std::move(x)), cont_(std::move(continuous)), atoms_(std::move(atoms)) {
  if (x_.size() < 2 || x_.size() != cont_.size())
    throw Error(Errc::BadParameters, "cumulative density needs matching x and value arrays");
  std::sort(atoms_.begin(), atoms_.end(),
            [](const DeltaComponent& a, const DeltaComponent& b) { return a.position < b.position; });
}

double CumulativeDensity::operator()(double lambda) const {
  double v = lambda < x_(0) ? 0.0 : interpolate(x_, cont_, lambda);
  for (const auto& a : atoms_)
    if (a.position <= lambda) v += a.weight;
  return v;
}

double CumulativeDensity::total() const {
  double v = cont_(cont_.size() - 1);
  for (const auto& a : atoms_) v += a.weight;
  return v;
}

double CumulativeDensity::quantile(double p) const {
  double lo = std::min(x_(0), atoms_.empty() ? x_(0) : atoms_.front().position);
  double hi = std::max(x_(x_.size() - 1), atoms_.empty() ? x_(0) : atoms_.back().position);
  if ((*this)(lo) >= p) return lo;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    if ((*this)(mid) >= p) hi = mid;
    else lo = mid;
  }
  return hi;
}

CumulativeDensity cumulative_density(const ResolventSolution& solution, double zero_mode_weight) {
  const Eigen::Index n = solution.size();
  if (n < 2) throw Error(Errc::GridTooCoarse, "need at least 2 grid points");
  Vector cont(n);
  cont(0) = 0.0;
  double scale = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) scale = std::max(scale, std::abs(solution.rho(i)));
  for (Eigen::Index i = 1; i < n; ++i) {
    const double step = 0.5 * (solution.rho(i) + solution.rho(i - 1)) * (solution.grid(i) - solution.grid(i - 1));
    if (step < -1e-9 * std::max(1.0, scale))
      throw Error(Errc::NonMonotoneDensityIntegral, "density integral decreases at lambda=" +
                                                        std::to_string(solution.grid(i)));
    cont(i) = cont(i - 1) + std::max(0.0, step);
  }
  std::vector<DeltaComponent> atoms;
  if (zero_mode_weight > 0.0) atoms.push_back({0.0, zero_mode_weight});
  return CumulativeDensity(solution.grid, std::move(cont), std::move(atoms));
}

CumulativeDensity cumulative_density(const DensityPrediction& p, int points) {
  if (points < 3) throw Error(Errc::GridTooCoarse, "need at least 3 nodes");
  Vector x(points), cont(points);
  for (int i = 0; i < points; ++i) {
    const double t = 0.5 * (1.0 - std::cos(kPi * i / (points - 1)));
    x(i) = p.lower + (p.upper - p.lower) * t;
  }
  cont(0) = 0.0;
  for (int i = 1; i < points; ++i)
    cont(i) = cont(i - 1) + 0.5 * (p.continuous(x(i)) + p.continuous(x(i - 1))) * (x(i) - x(i - 1));
  std::vector<DeltaComponent> atoms = p.deltas;
  if (p.zero_mode_weight > 0.0) atoms.push_back({0.0, p.zero_mode_weight});
  return CumulativeDensity(std::move(x), std::move(cont), std::move(atoms));
}

double UnfoldedSpectrum::mean_spacing() const {
  if (values.size() < 2) return 0.0;
  return (values.back() - values.front()) / static_cast<double>(values.size() - 1);
}

UnfoldedSpectrum unfold(const Vector& eigenvalues, const CumulativeDensity& cdf, double lo, double hi, double n) {
  if (!(hi > lo)) throw Error(Errc::BadParameters, "window needs hi > lo");
  const double scale = n > 0.0 ? n : static_cast<double>(eigenvalues.size());
  UnfoldedSpectrum out;
  out.window_lo = lo;
  out.window_hi = hi;
  out.unfolded_lo = scale * cdf(lo);
  out.unfolded_hi = scale * cdf(hi);
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
    const double l = eigenvalues(i);
    if (l >= lo && l <= hi) out.values.push_back(scale * cdf(l));
  }
  if (out.values.size() < 2)
    throw Error(Errc::EmptyWindow, "window [" + std::to_string(lo) + ", " + std::to_string(hi) + "] holds " +
                                       std::to_string(out.values.size()) + " eigenvalues");
  std::sort(out.values.begin(), out.values.end());
  return out;
}

double goe_number_variance(double r) {
  if (!(r > 0.0)) return 0.0;
  constexpr double gamma = std::numbers::egamma;
  const auto at = [](double x) {
    return 2.0 / (kPi * kPi) * (std::log(2.0 * kPi * x) + gamma + 1.0 - kPi * kPi / 8.0);
  };
  return r >= 1.0 ? at(r) : r * at(1.0);
}

double universal_two_point(double r) {
  if (!(r > 0.0)) throw Error(Errc::DomainError, "r must be positive, got " + std::to_string(r));
  return -1.0 / (kPi * kPi * r * r);
}

NumberVarianceCurve number_variance(const std::vector<UnfoldedSpectrum>& spectra, const std::vector<double>& r,
                                    const NumberVarianceOptions& options) {
  if (spectra.empty()) throw Error(Errc::BadParameters, "no spectra");
  NumberVarianceCurve out;
  out.window_lo = spectra.front().window_lo;
  out.window_hi = spectra.front().window_hi;
  const std::size_t m = spectra.size();

  for (std::size_t k = 0; k < r.size(); ++k) {
    const double len = r[k];
    if (!(len > 0.0)) throw Error(Errc::DomainError, "r must be positive");
    // Per-member sums so bootstrap resamples only re-add these.
    std::vector<double> cnt(m), sum(m), sq(m);
    for (std::size_t s = 0; s < m; ++s) {
      const auto& sp = spectra[s];
      if (sp.unfolded_hi - sp.unfolded_lo < len)
        throw Error(Errc::WindowTooNarrow, "r=" + std::to_string(len) + " exceeds unfolded window of member " +
                                               std::to_string(s));
      for (double a = sp.unfolded_lo; a + len <= sp.unfolded_hi; a += 0.5 * len) {
        const auto first = std::lower_bound(sp.values.begin(), sp.values.end(), a);
        const auto last = std::lower_bound(first, sp.values.end(), a + len);
        const double c = static_cast<double>(last - first);
        cnt[s] += 1.0;
        sum[s] += c;
        sq[s] += c * c;
      }
    }
    const auto pooled = [&](const std::vector<std::size_t>* pick) {
      double n = 0.0, s1 = 0.0, s2 = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        const std::size_t j = pick ? (*pick)[i] : i;
        n += cnt[j];
        s1 += sum[j];
        s2 += sq[j];
      }
      const double mean = s1 / n;
      return std::max(0.0, s2 / n - mean * mean);
    };
    const double value = pooled(nullptr);

    double se = 0.0;
    if (m > 1 && options.bootstrap > 1) {
      Rng rng(derive_seed(options.seed, k, 11));
      std::vector<std::size_t> pick(m);
      std::vector<double> boot(static_cast<std::size_t>(options.bootstrap));
      for (auto& b : boot) {
        for (auto& p : pick) p = std::min(m - 1, static_cast<std::size_t>(rng.uniform() * static_cast<double>(m)));
        b = pooled(&pick);
      }
      double mean = 0.0;
      for (double b : boot) mean += b;
      mean /= static_cast<double>(boot.size());
      for (double b : boot) se += (b - mean) * (b - mean);
      se = std::sqrt(se / static_cast<double>(boot.size() - 1));
    }
    out.r.push_back(len);
    out.sigma2.push_back(value);
    out.standard_error.push_back(se);
    out.goe.push_back(goe_number_variance(len));
  }
  return out;
}

UniversalityCheck universality_check(const ResolventSolution& solution, double kappa, double n, double lambda,
                                     double r, double factor) {
  const Eigen::Index size = solution.size();
  if (size < 3 || lambda < solution.grid(0) || lambda > solution.grid(size - 1))
    throw Error(Errc::OutsideSupport, "lambda=" + std::to_string(lambda) + " is off the solution grid");
  const double rho = interpolate(solution.grid, solution.rho, lambda);
  if (!(rho > 1e-4 * solution.rho.maxCoeff()))
    throw Error(Errc::OutsideSupport, "density vanishes at lambda=" + std::to_string(lambda));
  const double dp = interpolate(solution.grid, pv_derivative(solution), lambda);
  UniversalityCheck c;
  c.lhs = 2.0 * kPi * rho * rho * n;
  c.rhs = std::abs(((1.0 - kappa) / (lambda * lambda) - dp) * r);
  c.universal = c.lhs > factor * c.rhs;
  return c;
}

}  // namespace rmt
