#include <cmath>
#include <memory>

#include "rmt/ensembles.hpp"
#include "rmt/models.hpp"
#include "rmt/pastur.hpp"
#include "rmt/rng.hpp"
#include "rmt/stats.hpp"
#include "support.hpp"

using namespace rmt;

namespace {

EnsembleConfig woe(Eigen::Index n, Eigen::Index t, int members, std::uint64_t seed) {
  EnsembleConfig c;
  c.kind = EnsembleKind::Woe;
  c.n = n;
  c.t = t;
  c.members = members;
  c.seed = seed;
  return c;
}

EnsembleConfig two_channel(Eigen::Index n, Eigen::Index m, Eigen::Index t, PartitionedModel model, int members) {
  EnsembleConfig c;
  c.kind = EnsembleKind::TwoChannel;
  c.n = n;
  c.m = m;
  c.t = t;
  c.partitioned = std::make_shared<const PartitionedModel>(std::move(model));
  c.members = members;
  c.seed = 42;
  return c;
}

// Entrywise mean and standard error over members.
std::pair<Matrix, Matrix> mean_and_se(const EnsembleConfig& c) {
  Matrix sum = Matrix::Zero(c.n, c.n), sq = Matrix::Zero(c.n, c.n);
  for (int k = 0; k < c.members; ++k) {
    const Matrix x = sample_member(c, k);
    sum += x;
    sq += x.cwiseProduct(x);
  }
  const double m = c.members;
  const Matrix mean = sum / m;
  const Matrix var = (sq / m - mean.cwiseProduct(mean)) * (m / (m - 1));
  return {mean, (var / m).cwiseSqrt()};
}

}  // namespace

TEST_CASE("rng streams") {
  CHECK(derive_seed(1, 2, 3) == derive_seed(1, 2, 3));
  CHECK(derive_seed(1, 2, 3) != derive_seed(1, 3, 2));
  Rng a(5), b(5);
  CHECK(a.normal() == b.normal());
  Rng g(7);
  double sum = 0.0;
  for (int i = 0; i < 20000; ++i) sum += g.chi_square(10.0);
  CHECK(sum / 20000 == doctest::Approx(10.0).epsilon(0.02));
}

TEST_CASE("WOE with N=1 concentrates at sigma^2") {
  for (int k = 0; k < 10; ++k) {
    const double x = sample_woe(woe(1, 1000000, 10, 3), k)(0, 0);
    CHECK(x > 0.99);
    CHECK(x < 1.01);
  }
}

TEST_CASE("WOE ensemble mean is the identity") {
  const auto [mean, se] = mean_and_se(woe(16, 64, 1000, 11));
  const double bound = 3.0 / std::sqrt(1000.0 * 64.0);
  CHECK((mean - Matrix::Identity(16, 16)).cwiseAbs().maxCoeff() < bound);
}

TEST_CASE("WOE rank deficiency") {
  const SpectrumResult s = sample_spectrum(woe(1024, 512, 1, 5), 0);
  CHECK((s.eigenvalues.array() < 1e-8).count() == 512);
  CHECK(s.eigenvalues.minCoeff() >= -1e-9 * s.eigenvalues.maxCoeff());
}

TEST_CASE("CWOE with identity model equals WOE") {
  EnsembleConfig c = woe(12, 30, 3, 77);
  const Matrix w = sample_member(c, 2);
  c.kind = EnsembleKind::Cwoe;
  c.model = std::make_shared<const CorrelationModel>(identity_model(12));
  CHECK(sample_member(c, 2) == w);
}

TEST_CASE("CWOE ensemble mean is sigma^2 xi") {
  EnsembleConfig c = woe(64, 640, 500, 19);
  c.kind = EnsembleKind::Cwoe;
  c.model = std::make_shared<const CorrelationModel>(equal_cross(64, 0.5));
  const auto [mean, se] = mean_and_se(c);
  CHECK(((mean - c.model->xi()).cwiseAbs().array() / se.array()).maxCoeff() < 4.0);
}

TEST_CASE("exponential CWOE exceeds the MP edge") {
  EnsembleConfig c = woe(1024, 2048, 1, 23);
  c.kind = EnsembleKind::Cwoe;
  c.model = std::make_shared<const CorrelationModel>(exponential(1024, 0.9));
  CHECK(sample_spectrum(c, 0).eigenvalues.maxCoeff() > mp_edges(1.0, 2.0).second);
}

TEST_CASE("two-channel null mean is kappa_M") {
  const auto c = two_channel(64, 128, 640, null_model(64, 128), 500);
  const auto [mean, se] = mean_and_se(c);
  const Matrix expected = 0.2 * Matrix::Identity(64, 64);
  CHECK(((mean - expected).cwiseAbs().array() / se.array()).maxCoeff() < 4.0);
  const Vector e = sample_spectrum(c, 0).eigenvalues;
  CHECK(e.minCoeff() >= -1e-9 * e.maxCoeff());
}

TEST_CASE("rank-one cross block gives one separated eigenvalue") {
  auto c = two_channel(384, 640, 5120, rank_one_model(384, 640, 0.9, 0.9, 0.8), 100);
  c.method = TwoChannelMethod::Canonical;
  const auto null = cubic_null(c.kappa_n(), c.kappa_m(), midpoint_grid(0.0, 1.5, 3000));
  double edge = 0.0;
  for (Eigen::Index i = 0; i < null.size(); ++i)
    if (null.rho(i) > 1e-4 * null.rho.maxCoeff()) edge = null.grid(i);
  int good = 0;
  for (const auto& s : sample_spectra(c)) good += (s.eigenvalues.array() > 1.2 * edge).count() == 1;
  CHECK(good >= 99);
}

TEST_CASE("literal and canonical samplers agree in distribution") {
  auto c = two_channel(24, 48, 240, rank_one_model(24, 48, 0.9, 0.9, 0.6), 400);
  std::vector<double> lit, can;
  for (const auto& s : sample_spectra(c)) lit.push_back(s.eigenvalues.maxCoeff());
  c.method = TwoChannelMethod::Canonical;
  for (const auto& s : sample_spectra(c)) can.push_back(s.eigenvalues.maxCoeff());
  const Moments a = sample_moments(lit), b = sample_moments(can);
  const double se = std::sqrt(a.variance / lit.size() + b.variance / can.size());
  CHECK(std::abs(a.mean - b.mean) < 4.0 * se);
  CHECK(std::sqrt(b.variance / a.variance) == doctest::Approx(1.0).epsilon(0.2));
}

TEST_CASE("parallel sampling is deterministic") {
  const auto c = woe(20, 40, 8, 99);
  const auto one = sample_spectra(c, 1);
  const auto four = sample_spectra(c, 4);
  for (std::size_t k = 0; k < one.size(); ++k) {
    CHECK(one[k].eigenvalues == four[k].eigenvalues);
    CHECK(one[k].member == static_cast<int>(k));
  }
  CHECK(one[0].fingerprint == c.fingerprint());
}

TEST_CASE("config validation") {
  CHECK_ERRC(woe(0, 10, 1, 1).validate(), Errc::BadDimensions);
  auto c = two_channel(8, 16, 12, null_model(8, 16), 1);
  CHECK_ERRC(c.validate(), Errc::BadDimensions);
  EnsembleConfig cw = woe(4, 10, 1, 1);
  cw.kind = EnsembleKind::Cwoe;
  CHECK_ERRC(cw.validate(), Errc::BadParameters);
}

TEST_CASE("binary correlation identities") {
  EnsembleConfig c = woe(32, 64, 2000, 123);
  SUBCASE("identity 1 with unit matrices") {
    const auto r = verify_identity(1, Matrix::Identity(64, 64), Matrix::Identity(32, 32), c);
    CHECK(r.analytic == doctest::Approx(1.0));
    CHECK(std::abs(r.estimate - r.analytic) < 4 * r.standard_error);
  }
  SUBCASE("square case") {
    c.t = 32;
    c.sigma = 1.5;
    const auto r2 = verify_identity(2, Matrix::Identity(32, 32), Matrix::Identity(32, 32), c);
    CHECK(r2.analytic == doctest::Approx(2.25));
    CHECK(std::abs(r2.estimate - r2.analytic) < 4 * r2.standard_error);
    Rng rng(8);
    Matrix phi(32, 32), psi(32, 32);
    rng.fill_normal(phi);
    rng.fill_normal(psi);
    c.members = 10000;
    const auto r3 = verify_identity(3, phi, psi, c);
    CHECK(r3.analytic == doctest::Approx(2.25 / 32 * (psi * phi).trace() / 32));
    CHECK(std::abs(r3.estimate - r3.analytic) < 4 * r3.standard_error);
  }
  CHECK_ERRC(verify_identity(1, Matrix::Identity(3, 3), Matrix::Identity(32, 32), c), Errc::DimensionMismatch);
  CHECK_ERRC(verify_identity(5, Matrix::Identity(64, 64), Matrix::Identity(32, 32), c), Errc::BadParameters);
}
