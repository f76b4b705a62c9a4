#include "rmt/portfolio.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "rmt/error.hpp"
#include "rmt/models.hpp"
#include "rmt/powermap.hpp"
#include "rmt/rng.hpp"
#include "rmt/stats.hpp"

namespace rmt {

MarketModel::MarketModel(Matrix c0, Vector sigmas) : c0_(std::move(c0)), sigmas_(std::move(sigmas)) {
  if (c0_.rows() != c0_.cols() || c0_.rows() != sigmas_.size())
    throw Error(Errc::DimensionMismatch, "C0 and sigmas disagree in size");
  for (Eigen::Index k = 0; k < sigmas_.size(); ++k)
    if (!(sigmas_(k) > 0.0)) throw Error(Errc::BadParameters, "sigma " + std::to_string(k) + " is not positive");
  const CorrelationModel model(c0_, "market");
  c0_sqrt_ = model.sqrt();
  sigma0_ = sigmas_.asDiagonal() * c0_ * sigmas_.asDiagonal();
}

MarketModel make_market(const MarketSpec& spec) {
  if (spec.blocks < 1 || spec.block_size < 1) throw Error(Errc::BadDimensions, "need at least one block");
  const Eigen::Index n = static_cast<Eigen::Index>(spec.blocks) * spec.block_size;
  Matrix c0(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      c0(i, j) = i == j ? 1.0 : (i / spec.block_size == j / spec.block_size ? spec.rho_in : spec.rho_out);
  Rng rng(spec.seed);
  Vector sigmas(n);
  for (Eigen::Index k = 0; k < n; ++k) sigmas(k) = rng.uniform(spec.sigma_lo, spec.sigma_hi);
  return MarketModel(std::move(c0), std::move(sigmas));
}

Vector min_variance_weights(const Matrix& sigma) {
  if (sigma.rows() != sigma.cols() || sigma.rows() == 0)
    throw Error(Errc::DimensionMismatch, "covariance must be square");
  const auto eig = symmetric_eigen(sigma);
  const double lo = eig.values(0), hi = eig.values(eig.values.size() - 1);
  if (!(lo > 0.0) || !(hi / lo < 1e12)) {
    std::ostringstream os;
    os << "eigenvalues span [" << lo << ", " << hi << "]";
    throw Error(Errc::SingularCovariance, os.str());
  }
  const Vector e = Vector::Ones(sigma.rows());
  const Vector x = eig.vectors * ((eig.vectors.transpose() * e).array() / eig.values.array()).matrix();
  return x / x.sum();
}

DataPanel simulate_market(const MarketModel& model, Eigen::Index t, std::uint64_t seed) {
  if (t < 2) throw Error(Errc::TooShort, "need T >= 2");
  Rng rng(seed);
  Matrix z(model.n(), t);
  rng.fill_normal(z);
  Matrix r = model.sigmas().asDiagonal() * (model.c0_sqrt() * z);
  return DataPanel(std::move(r));
}

Matrix estimate_covariance(const DataPanel& returns, double q) {
  const StandardizedPanel sp = standardize(returns);
  const Matrix c = power_map(correlation_matrix(sp).matrix, q).matrix;
  return sp.stds.asDiagonal() * c * sp.stds.asDiagonal();
}

PortfolioOutcome evaluate_portfolio(const Vector& weights, const MarketModel& model) {
  PortfolioOutcome o;
  o.weights = weights;
  o.omega2 = weights.dot(model.sigma0() * weights);
  const Vector w0 = min_variance_weights(model.sigma0());
  o.omega0_2 = w0.dot(model.sigma0() * w0);
  o.ratio = o.omega2 / o.omega0_2;
  return o;
}

double homogeneous_ratio(const MarketModel& model) {
  const Vector w = Vector::Constant(model.n(), 1.0 / static_cast<double>(model.n()));
  return evaluate_portfolio(w, model).ratio;
}

StudyResult run_study(const MarketModel& model, const std::vector<Eigen::Index>& t_values,
                      const std::vector<double>& q_values, int members, std::uint64_t seed, int workers) {
  if (members < 1) throw Error(Errc::BadParameters, "members must be >= 1");
  for (double q : q_values)
    if (!(q >= 1.0)) throw Error(Errc::BadExponent, "q must be >= 1");
  const Vector w0 = min_variance_weights(model.sigma0());
  const double omega0 = w0.dot(model.sigma0() * w0);
  const std::size_t nq = q_values.size();
  const std::size_t m = static_cast<std::size_t>(members);

  StudyResult out;
  out.homogeneous = homogeneous_ratio(model);
  out.points.resize(t_values.size() * m * nq);
  parallel_for(t_values.size() * m, workers, [&](std::size_t unit) {
    const std::size_t ti = unit / m, member = unit % m;
    const DataPanel returns = simulate_market(model, t_values[ti], derive_seed(derive_seed(seed, ti), member));
    for (std::size_t qi = 0; qi < nq; ++qi) {
      StudyPoint p;
      p.t = t_values[ti];
      p.q = q_values[qi];
      p.member = static_cast<int>(member);
      p.estimator = p.q == 1.0 ? "sample" : "powermap";
      try {
        const Vector w = min_variance_weights(estimate_covariance(returns, p.q));
        p.ratio = w.dot(model.sigma0() * w) / omega0;
      } catch (const Error& e) {
        if (e.code() != Errc::SingularCovariance) throw;
        p.ratio = std::numeric_limits<double>::quiet_NaN();
      }
      out.points[unit * nq + qi] = p;
    }
  });

  for (std::size_t ti = 0; ti < t_values.size(); ++ti) {
    for (std::size_t qi = 0; qi < nq; ++qi) {
      StudySummary s;
      s.t = t_values[ti];
      s.q = q_values[qi];
      s.estimator = s.q == 1.0 ? "sample" : "powermap";
      std::vector<double> v;
      for (std::size_t k = 0; k < m; ++k) {
        const double r = out.points[(ti * m + k) * nq + qi].ratio;
        if (std::isnan(r)) ++s.missing;
        else v.push_back(r);
      }
      s.valid = static_cast<int>(v.size());
      if (!v.empty()) {
        s.median = quantile(v, 0.5);
        s.lower_quartile = quantile(v, 0.25);
        s.upper_quartile = quantile(v, 0.75);
        s.mean = sample_moments(v).mean;
      } else {
        s.median = s.lower_quartile = s.upper_quartile = s.mean = std::numeric_limits<double>::quiet_NaN();
      }
      out.summary.push_back(s);
    }
  }
  return out;
}

}  // namespace rmt
