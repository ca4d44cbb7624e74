#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "stochlab/rng.hpp"
#include "stochlab/stats.hpp"

using namespace stochlab;

namespace {
std::vector<double> draws(Rng& rng, std::size_t n, auto&& f) {
  std::vector<double> xs(n);
  for (auto& x : xs) x = f(rng);
  return xs;
}
}  // namespace

TEST_CASE("uniform replays under identical seed") {
  Rng a(RandomSource(42)), b(RandomSource(42));
  for (int i = 0; i < 3; ++i) CHECK(sample_uniform(a) == sample_uniform(b));
  Rng c(RandomSource(42, 1));
  Rng d(RandomSource(42));
  CHECK(sample_uniform(c) != sample_uniform(d));
}

TEST_CASE("uniform mean and KS") {
  Rng rng(RandomSource(7));
  auto xs = draws(rng, 100000, [](Rng& r) { return sample_uniform(r); });
  for (double x : xs) REQUIRE((x >= 0.0 && x < 1.0));
  CHECK(std::fabs(stats::mean(xs) - 0.5) < 0.01);
  xs.resize(10000);
  const double d = stats::ks_statistic(xs, [](double x) { return x; });
  CHECK(d < stats::ks_critical(10000, 0.05));
}

TEST_CASE("streams are uncorrelated") {
  const RandomSource root(99);
  for (std::uint64_t k = 0; k < 4; ++k) {
    Rng a = root.child(k).stream();
    Rng b = root.child(k + 1).stream();
    auto xs = draws(a, 100000, [](Rng& r) { return r.uniform(); });
    auto ys = draws(b, 100000, [](Rng& r) { return r.uniform(); });
    CHECK(std::fabs(stats::correlation(xs, ys)) < 0.01);
  }
  CHECK(root.child(3) == root.child(3));
  CHECK_FALSE(root.child(3) == root.child(4));
}

TEST_CASE("exponential moments, memorylessness and inverse transform") {
  Rng rng(RandomSource(11));
  auto e1 = draws(rng, 100000, [](Rng& r) { return sample_exponential(r, 1.0); });
  CHECK(std::fabs(stats::mean(e1) - 1.0) < 0.02);
  auto e2 = draws(rng, 100000, [](Rng& r) { return sample_exponential(r, 2.0); });
  CHECK(std::fabs(stats::variance(e2) - 0.25) < 0.02);

  double gt1 = 0, gt2 = 0;
  for (double x : e1) {
    if (x > 1.0) ++gt1;
    if (x > 2.0) ++gt2;
  }
  CHECK(std::fabs(gt2 / gt1 - gt1 / 1e5) < 0.02);

  Rng a(RandomSource(5)), b(RandomSource(5));
  for (int i = 0; i < 1000; ++i) {
    double u = sample_uniform(a);
    if (u == 0.0) u = std::numeric_limits<double>::denorm_min();
    CHECK(sample_exponential(b, 3.0) == -std::log(u) / 3.0);
  }
  CHECK_THROWS_AS(sample_exponential(rng, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(sample_exponential(rng, -1.0), std::invalid_argument);
}

TEST_CASE("family samplers") {
  Rng rng(RandomSource(2024));
  auto z = draws(rng, 100000, [](Rng& r) { return sample_family(r, family::Normal{0.0, 1.0}); });
  CHECK(std::fabs(stats::kurtosis(z) - 3.0) < 0.1);
  CHECK(std::fabs(stats::mean(z)) < 0.01);

  auto pois = draws(rng, 100000, [](Rng& r) { return sample_family(r, family::Poisson{3.0}); });
  CHECK(std::fabs(stats::mean(pois) - 3.0) < 0.05);
  CHECK(std::fabs(stats::variance(pois) - 3.0) < 0.05);

  auto big = draws(rng, 100000, [](Rng& r) { return sample_family(r, family::Poisson{40.0}); });
  CHECK(std::fabs(stats::mean(big) - 40.0) < 0.15);
  CHECK(std::fabs(stats::variance(big) - 40.0) < 1.0);

  auto beta00 = draws(rng, 10000, [](Rng& r) { return sample_family(r, family::Beta{0.0, 0.0}); });
  CHECK(stats::ks_statistic(beta00, [](double x) { return x; }) < stats::ks_critical(10000, 0.05));

  // density x^2 (1-x): mean (w+1)/(w+l+2) = 3/5
  auto beta21 = draws(rng, 100000, [](Rng& r) { return sample_beta(r, 2.0, 1.0); });
  CHECK(std::fabs(stats::mean(beta21) - 0.6) < 0.005);

  auto bern = draws(rng, 100000, [](Rng& r) { return sample_family(r, family::Bernoulli{0.3}); });
  CHECK(std::fabs(stats::mean(bern) - 0.3) < 0.01);

  auto g = draws(rng, 100000, [](Rng& r) { return sample_gamma(r, 0.5); });
  CHECK(std::fabs(stats::mean(g) - 0.5) < 0.01);
}

TEST_CASE("categorical frequencies within three sigma") {
  const std::vector<double> w{0.1, 0.0, 0.2, 0.3, 0.4, 0.0};
  CategoricalSampler sampler(w);
  Rng rng(RandomSource(3));
  const int n = 100000;
  std::vector<int> counts(w.size());
  for (int i = 0; i < n; ++i) ++counts[sampler(rng)];
  for (std::size_t k = 0; k < w.size(); ++k) {
    const double f = counts[k] / double(n);
    CHECK(std::fabs(f - w[k]) <= 3.0 * std::sqrt(w[k] * (1 - w[k]) / n) + 1e-12);
  }
}

TEST_CASE("invalid family parameters are rejected") {
  CHECK_THROWS_AS(validate(family::Bernoulli{1.5}), std::invalid_argument);
  CHECK_THROWS_AS(validate(family::Poisson{0.0}), std::invalid_argument);
  CHECK_THROWS_AS(validate(family::Normal{0.0, -1.0}), std::invalid_argument);
  CHECK_THROWS_AS(validate(family::Beta{-2.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(validate(family::Categorical{{0.0, 0.0}}), std::invalid_argument);
  CHECK_THROWS_AS(validate(family::Categorical{{1.0, -0.5}}), std::invalid_argument);
  CHECK_NOTHROW(validate(family::Normal{1.0, 0.0}));
}
