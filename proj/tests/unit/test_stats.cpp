#include <cmath>

#include "rmt/stats.hpp"
#include "support.hpp"

using namespace rmt;

TEST_CASE("histogram") {
  const auto h = histogram({0.1, 0.2, 0.6, 1.5}, 0.0, 1.0, 2);
  CHECK(h.counts == std::vector<double>{2.0, 1.0});
  CHECK(h.density[0] == doctest::Approx(2.0 / (4 * 0.5)));
  CHECK(h.center(1) == doctest::Approx(0.75));
}

TEST_CASE("L1 distances") {
  std::vector<double> v;
  for (int k = 0; k < 1000; ++k) v.push_back((k + 0.5) / 1000);
  const auto h = histogram(v, 0.0, 1.0, 10);
  CHECK(l1_distance(h, [](double) { return 1.0; }) < 1e-12);
  CHECK(l1_distance_cumulative(h, [](double x) { return x; }) < 1e-12);
  CHECK(l1_distance(h, [](double) { return 0.0; }) == doctest::Approx(1.0));
}

TEST_CASE("moments and quantiles") {
  const auto m = sample_moments({1.0, 2.0, 3.0, 4.0});
  CHECK(m.mean == doctest::Approx(2.5));
  CHECK(m.variance == doctest::Approx(5.0 / 3.0));
  CHECK(m.skewness == doctest::Approx(0.0));
  CHECK(quantile({3.0, 1.0, 2.0}, 0.5) == doctest::Approx(2.0));
  CHECK(quantile({1.0, 2.0}, 0.25) == doctest::Approx(1.25));
}

TEST_CASE("linear fit") {
  const auto f = linear_fit({1.0, 2.0, 3.0}, {3.0, 5.0, 7.0});
  CHECK(f.slope == doctest::Approx(2.0));
  CHECK(f.intercept == doctest::Approx(1.0));
  CHECK(f.r2 == doctest::Approx(1.0));
}
