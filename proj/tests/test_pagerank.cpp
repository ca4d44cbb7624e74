#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "stochlab/markov_discrete.hpp"
#include "stochlab/pagerank.hpp"

using namespace stochlab;
using namespace stochlab::pagerank;

namespace {

WebGraph two_node() { return WebGraph(2, {{0, 0, 1.0}, {0, 1, 1.0}, {1, 0, 1.0}}); }
WebGraph two_cycle() { return WebGraph(2, {{0, 1, 1.0}, {1, 0, 1.0}}); }

WebGraph random_graph(std::size_t n, std::uint64_t seed) {
  Rng rng = RandomSource(seed).stream();
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    const auto k = 1 + rng.below(5);
    for (std::uint64_t e = 0; e < k; ++e) edges.push_back({i, rng.below(n), 1.0});
  }
  return WebGraph(n, edges);
}

}  // namespace

TEST_CASE("graph construction") {
  const WebGraph g(3, {{0, 1, 2.0}, {0, 2, 1.0}, {0, 1, 1.0}, {1, 0, 1.0}});
  CHECK(g.patched_dangling() == 1);
  CHECK(g.out(0).size() == 2);
  CHECK(g.out(0)[0].prob == doctest::Approx(0.75));
  CHECK(g.out(2).size() == 3);
  CHECK_NOTHROW(g.validate());
  CHECK_THROWS_AS(WebGraph(2, {{0, 2, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(WebGraph(2, {{0, 1, -1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(WebGraph(0, {}), std::invalid_argument);
}

TEST_CASE("power iteration") {
  const auto r = power_iteration(two_node(), 0.0, 1e-13);
  CHECK(std::fabs(r.nu[0] - 2.0 / 3) <= 1e-10);
  CHECK(std::fabs(r.nu[1] - 1.0 / 3) <= 1e-10);
  CHECK(r.residual <= 1e-12);

  const auto u = power_iteration(random_graph(30, 4), 1.0);
  CHECK(u.iterations == 1);
  for (double v : u.nu) CHECK(v == 1.0 / 30);

  // teleported chain against the dense stationary solver
  const auto g = random_graph(40, 9);
  const auto pr = power_iteration(g);
  markov::Matrix m = markov::Matrix::Constant(40, 40, kDefaultTeleport / 40);
  for (std::size_t i = 0; i < 40; ++i)
    for (const auto& l : g.out(i)) m(i, l.node) += (1 - kDefaultTeleport) * l.prob;
  const auto st = markov::stationary(markov::StochasticMatrix(m));
  for (std::size_t i = 0; i < 40; ++i) CHECK(pr.nu[i] == doctest::Approx(st.per_class[0][i]).epsilon(1e-9));

  // periodic chain whose stationary law is not uniform never settles
  const WebGraph bip(3, {{0, 1, 1.0}, {1, 0, 1.0}, {1, 2, 1.0}, {2, 1, 1.0}});
  CHECK_THROWS_AS(power_iteration(bip, 0.0, 1e-12, 50), std::runtime_error);
  CHECK_THROWS_AS(power_iteration(two_node(), 1.5), std::invalid_argument);
}

TEST_CASE("teleported iterates are distributions and contract") {
  const auto g = random_graph(100, 17);
  const double delta = 0.15;
  const auto nu = power_iteration(g, delta, 1e-15).nu;
  std::vector<double> p(100, 0.0);
  p[3] = 1.0;
  for (int t = 0; t < 60; ++t) {
    const auto q = g.teleport_step(p, delta);
    double s = 0.0;
    for (double v : q) s += v;
    REQUIRE(std::fabs(s - 1.0) <= 1e-12);
    REQUIRE(l1_distance(q, nu) <= (1 - delta) * l1_distance(p, nu) + 1e-14);
    p = q;
  }
}

TEST_CASE("Cesaro averaging") {
  const auto c = cesaro_pagerank(two_cycle(), 10000, {1.0, 0.0});
  CHECK(std::fabs(c.nu[0] - 0.5) <= 1e-4);
  CHECK(c.residual <= 2.0 / 10000);
  const auto odd = cesaro_pagerank(two_cycle(), 10001, {1.0, 0.0});
  CHECK(odd.residual == doctest::Approx(2.0 / 10001));

  CHECK(cesaro_pagerank(two_cycle(), 37, {0.5, 0.5}).residual == 0.0);
  const auto s = cesaro_pagerank(two_node(), 10000, {1.0, 0.0});
  CHECK(std::fabs(s.nu[0] - 2.0 / 3) <= 1e-3);
  CHECK(s.residual <= 2.0 / 10000);
  CHECK_THROWS_AS(cesaro_pagerank(two_node(), 0), std::invalid_argument);
}

TEST_CASE("Monte-Carlo walkers") {
  const auto exact = power_iteration(two_node(), 0.15, 1e-14).nu;
  McmcOptions opt;
  opt.walkers = 100000;
  opt.steps = 200;
  const auto r = mcmc_pagerank(two_node(), 0.15, opt, RandomSource(5));
  CHECK(l2_distance(r.estimate.nu, exact) <= 0.02);
  CHECK(r.bound == doctest::Approx(4 * std::sqrt(std::log(100.0) / 1e5)));

  const WebGraph one(1, {{0, 0, 1.0}});
  opt.walkers = 50;
  opt.steps = 0;
  const auto o = mcmc_pagerank(one, 0.15, opt, RandomSource(1));
  CHECK(o.estimate.nu[0] == 1.0);

  CHECK(mcmc_error_bound(400, 0.01) == doctest::Approx(0.5 * mcmc_error_bound(100, 0.01)));
  CHECK(default_walk_length(100, 0.15, 1e-3) == static_cast<std::size_t>(std::ceil(std::log(1e5) / 0.15)));

  // same seed, same answer
  opt.walkers = 1000;
  opt.steps = 20;
  const auto g = random_graph(50, 2);
  CHECK(mcmc_pagerank(g, 0.2, opt, RandomSource(8)).estimate.nu == mcmc_pagerank(g, 0.2, opt, RandomSource(8)).estimate.nu);
}

TEST_CASE("poll size") {
  CHECK(bernoulli_poll_size(0.05, 0.01) == 530);
  CHECK(bernoulli_poll_size(0.5, 0.5) == 2);
  const auto a = bernoulli_poll_size(0.02, 0.05), b = bernoulli_poll_size(0.01, 0.05);
  CHECK(std::fabs(double(b) / double(a) - 4.0) < 0.01);
  CHECK_THROWS_AS(bernoulli_poll_size(0.0, 0.1), std::invalid_argument);
}

TEST_CASE("preferential attachment growth") {
  const auto one = buckley_osthus_generate(1, 1.0, 1, RandomSource(1));
  CHECK(one.target[0] == 0);
  CHECK(one.sites.size() == 1);
  CHECK(one.sites.out(0)[0].prob == 1.0);

  const auto g = buckley_osthus_generate(5000, 0.5, 10, RandomSource(2));
  std::size_t total = 0;
  for (auto d : g.indegree) total += d;
  CHECK(total == 5000);
  for (std::size_t t = 1; t < 5000; ++t) REQUIRE(g.target[t] < t);
  CHECK(g.sites.size() == 500);
  CHECK_NOTHROW(g.sites.validate());
  // weights are multiples of 1/m
  for (std::size_t s = 0; s < g.sites.size(); ++s)
    for (const auto& l : g.sites.out(s)) REQUIRE(std::fabs(l.prob * 10 - std::round(l.prob * 10)) < 1e-12);

  CHECK_THROWS_AS(buckley_osthus_generate(10, 0.0, 1, RandomSource(1)), std::invalid_argument);
}

TEST_CASE("attachment probabilities at a = 1") {
  // third page: page 0 has in-degree 2, page 1 has 0, so P(0) = (2 + 1)/(2 * 2)
  int hits = 0;
  const int runs = 200000;
  for (int r = 0; r < runs; ++r) {
    const auto g = buckley_osthus_generate(3, 1.0, 1, RandomSource(7).child(r));
    hits += g.target[2] == 0;
  }
  CHECK(std::fabs(hits / double(runs) - 0.75) < 0.004);
}

TEST_CASE("degree law follows the mean-field recursion") {
  for (double a : {1.0, 0.277}) {
    const auto c = mean_field_degree_law(a, 10);
    const double beta = a / (1 + a);
    CHECK(c[0] == doctest::Approx(1 / (1 + beta)));
    for (std::size_t k = 1; k <= 10; ++k)
      CHECK(c[k] / c[k - 1] == doctest::Approx(1 - (2 - beta) / (1 + beta + k * (1 - beta))));

    const auto g = buckley_osthus_generate(100000, a, 1, RandomSource(kDefaultSeed, 15));
    const auto h = degree_histogram(g.indegree);
    for (std::size_t k = 0; k <= 10; ++k) CHECK(std::fabs(h[k] / 1e5 - c[k]) <= 0.1 * c[k]);
  }
}

TEST_CASE("power-law fits") {
  std::vector<double> h(10001, 0.0);
  for (int k = 1; k <= 10000; ++k) h[k] = std::pow(k, -3.0);
  CHECK(std::fabs(powerlaw_fit(h).exponent - 3.0) <= 0.02);
  CHECK_THROWS_AS(powerlaw_fit(std::vector<double>(5, 1.0)), std::domain_error);

  const auto g = buckley_osthus_generate(100000, 0.277, 1, RandomSource(3));
  const auto r = rank_law_fit(g.indegree);
  CHECK(std::fabs(r.exponent - 1 / 1.277) < 0.1);
}
