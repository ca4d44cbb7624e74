#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "oracles.hpp"
#include "stochlab/decision.hpp"

using namespace stochlab;
using namespace stochlab::decision;

namespace {

// one state, two actions paying 1 and 0
MdpModel single_state(double gamma, double r0 = 1.0, double r1 = 0.0) {
  MdpModel m;
  m.states = 1;
  m.actions = 2;
  m.gamma = gamma;
  m.kernel = {{{{0, 1.0, 0.0}}, {{0, 1.0, 0.0}}}};
  m.action_reward = {{r0, r1}};
  return m;
}

}  // namespace

TEST_CASE("value iteration on hand-solvable models") {
  const auto r = value_iteration(single_state(0.5));
  CHECK(r.value[0] == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(r.q[0][0] == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(r.q[0][1] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(r.policy[0] == 0);
  CHECK(r.residual <= 1e-10);

  const auto z = value_iteration(single_state(0.9, 0.0, 0.0));
  CHECK(z.value[0] == 0.0);
  CHECK(z.policy[0] == 0);

  // ties go to the lowest action
  CHECK(value_iteration(single_state(0.5, 1.0, 1.0)).policy[0] == 0);

  MdpModel bad = single_state(0.5);
  bad.kernel[0][1][0].prob = 0.7;
  CHECK_THROWS_AS(value_iteration(bad), std::invalid_argument);
}

TEST_CASE("undiscounted backward induction") {
  // 0 -> {1 or 2} -> 3 (absorbing, no reward)
  MdpModel m;
  m.states = 4;
  m.actions = 2;
  m.gamma = 1.0;
  m.kernel = {{{{1, 1.0, 1.0}}, {{1, 0.5, 0.0}, {2, 0.5, 4.0}}},
              {{{3, 1.0, 1.0}}, {{3, 1.0, 0.5}}},
              {{{3, 1.0, 2.0}}, {{3, 1.0, 0.0}}},
              {{{3, 1.0, 0.0}}, {{3, 1.0, 0.0}}}};
  const auto r = value_iteration(m);
  CHECK(r.value[1] == doctest::Approx(1.0));
  CHECK(r.value[2] == doctest::Approx(2.0));
  CHECK(r.value[0] == doctest::Approx(0.5 * 1.0 + 0.5 * (4.0 + 2.0)));
  CHECK(r.policy[0] == 1);
  CHECK(r.residual <= 1e-12);

  CHECK_THROWS_AS(value_iteration(single_state(1.0)), std::domain_error);
  MdpModel loop = m;
  loop.kernel[1][0] = {{0, 1.0, 0.0}};
  CHECK_THROWS_AS(value_iteration(loop), std::domain_error);
}

TEST_CASE("Bellman operator contracts") {
  Rng rng = RandomSource(4).stream();
  for (int trial = 0; trial < 50; ++trial) {
    const double gamma = 0.1 + 0.85 * rng.uniform();
    const auto m = MdpModel::random(5, 3, gamma, rng);
    QValues a(5, std::vector<double>(3)), b = a;
    for (auto* q : {&a, &b})
      for (auto& row : *q)
        for (auto& v : row) v = rng.normal(0.0, 5.0);
    REQUIRE(sup_distance(bellman_q(m, a), bellman_q(m, b)) <= gamma * sup_distance(a, b) + 1e-12);
  }
}

TEST_CASE("greedy policy beats every stationary policy") {
  Rng rng = RandomSource(6).stream();
  for (int trial = 0; trial < 5; ++trial) {
    const std::size_t ns = 3 + trial % 4, na = 2 + trial % 2;
    const auto m = MdpModel::random(ns, na, 0.85, rng);
    const auto vi = value_iteration(m, 1e-12);
    const auto greedy = evaluate_policy(m, vi.policy);
    for (std::size_t s = 0; s < ns; ++s) CHECK(greedy[s] == doctest::Approx(vi.value[s]).epsilon(1e-9));
    std::size_t total = 1;
    for (std::size_t s = 0; s < ns; ++s) total *= na;
    REQUIRE(total <= 4096);
    for (std::size_t code = 0; code < total; ++code) {
      std::vector<std::size_t> pol(ns);
      std::size_t c = code;
      for (auto& p : pol) {
        p = c % na;
        c /= na;
      }
      const auto v = evaluate_policy(m, pol);
      for (std::size_t s = 0; s < ns; ++s) REQUIRE(v[s] <= greedy[s] + 1e-9);
    }
  }
}

TEST_CASE("secretary recursion") {
  const auto three = secretary_solve(3);
  CHECK(three.threshold == 2);
  CHECK(three.success == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(three.success == doctest::Approx(oracle::secretary_brute_force(3, 2)));

  for (int n = 1; n <= 8; ++n) {
    const auto s = secretary_solve(n);
    double best = 0.0;
    for (int th = 1; th <= n; ++th) best = std::max(best, oracle::secretary_brute_force(n, th));
    CHECK(s.success == doctest::Approx(best).epsilon(1e-12));
    CHECK(oracle::secretary_brute_force(n, static_cast<int>(s.threshold)) == doctest::Approx(best).epsilon(1e-12));
  }

  const auto k = secretary_solve(1000);
  CHECK(std::abs(static_cast<long>(k.threshold) - 368) <= 2);
  CHECK(std::fabs(k.success - 0.3681) <= 0.002);
  CHECK(std::fabs(k.success - k.harmonic) <= 1e-12);
  for (std::size_t s = 1; s + 1 < k.threshold; ++s) REQUIRE(k.value[s] >= k.value[s + 1] - 1e-15);
  for (std::size_t s = k.threshold; s <= 1000; ++s) REQUIRE(k.value[s] == doctest::Approx(s / 1000.0).epsilon(1e-14));

  CHECK(secretary_solve(1).success == 1.0);
  CHECK_THROWS_AS(secretary_solve(0), std::invalid_argument);
}

TEST_CASE("secretary simulation") {
  const auto k = secretary_solve(1000);
  CHECK(std::fabs(secretary_simulate(1000, k.threshold, 100000, RandomSource(2)) - 0.368) <= 0.005);

  const std::size_t trials = 200000;
  const double n = 20;
  const double se = 3 * std::sqrt((1 / n) / trials);
  CHECK(std::fabs(secretary_simulate(20, 20, trials, RandomSource(3)) - 1 / n) <= se);
  CHECK(std::fabs(secretary_simulate(20, 1, trials, RandomSource(4)) - 1 / n) <= se);
  CHECK(std::fabs(secretary_simulate(2, 2, trials, RandomSource(5)) - 0.5) <= 0.005);
  CHECK_THROWS_AS(secretary_simulate(5, 6, 10, RandomSource(1)), std::invalid_argument);
}

TEST_CASE("Gittins index") {
  CHECK(std::fabs(gittins_index(3, 1, 1e-4) - 4.0 / 6.0) <= 0.002);
  CHECK(gittins_index(0, 0, 0.9) > 0.5);
  CHECK(gittins_index(5, 2, 0.9, 200) > gittins_index(2, 5, 0.9, 200));

  // on the lattice w + l <= 10: increasing in w, decreasing in l, inside (0, 1)
  std::vector<std::vector<double>> g(11, std::vector<double>(11, 0.0));
  for (int w = 0; w <= 10; ++w)
    for (int l = 0; w + l <= 10; ++l) {
      g[w][l] = gittins_index(w, l, 0.9, 200, 1e-9);
      REQUIRE(g[w][l] > 0.0);
      REQUIRE(g[w][l] < 1.0);
    }
  for (int w = 0; w <= 9; ++w)
    for (int l = 0; w + l <= 9; ++l) {
      CHECK(g[w + 1][l] > g[w][l]);
      CHECK(g[w][l + 1] < g[w][l]);
    }

  CHECK_THROWS_AS(gittins_index(5, 5, 0.9, 10), std::invalid_argument);
  CHECK_THROWS_AS(gittins_index(1, 1, 1.0), std::invalid_argument);
}

TEST_CASE("Q-learning") {
  QLearningOptions opt;
  opt.updates = 100000;
  for (auto sched : {StepSchedule::Harmonic, StepSchedule::Rescaled}) {
    opt.schedule = sched;
    const auto t = q_learning(single_state(0.5), opt, RandomSource(1));
    CHECK(std::fabs(t.q[0][0] - 2.0) <= 0.02);
    CHECK(std::fabs(t.q[0][1] - 1.0) <= 0.02);
    CHECK(t.visits[0][0] + t.visits[0][1] == opt.updates);
  }
  const auto z = q_learning(single_state(0.5, 0.0, 0.0), opt, RandomSource(1));
  CHECK(z.q[0][0] == 0.0);
  CHECK(z.q[0][1] == 0.0);

  Rng rng = RandomSource(kDefaultSeed, 40).stream();
  const auto m = MdpModel::random(4, 2, 0.8, rng);
  const auto vi = value_iteration(m, 1e-12);
  opt.updates = 1000000;
  opt.schedule = StepSchedule::Rescaled;
  CHECK(sup_distance(q_learning(m, opt, RandomSource(9)).q, vi.q) <= 0.05);
  opt.schedule = StepSchedule::Polynomial;
  CHECK(sup_distance(q_learning(m, opt, RandomSource(9)).q, vi.q) <= 0.05);
}

TEST_CASE("Exp3") {
  const auto r = exp3({0.5, 0.5}, 10000, RandomSource(1), {0.0, true, true, {}});
  CHECK(r.eta == doctest::Approx(std::sqrt(2 * std::log(2.0) / 20000)));
  CHECK(r.eta == doctest::Approx(0.008326).epsilon(1e-4));
  for (const auto& p : r.probabilities) {
    REQUIRE(p[0] + p[1] == doctest::Approx(1.0).epsilon(1e-14));
  }
  CHECK(r.arms.size() == 10000);
  CHECK(std::fabs(r.reward - 5000) <= 3 * std::sqrt(10000 * 0.25));

  // with the pulls forced, importance-weighted sums are unbiased for each arm's mean
  const std::vector<double> arms{0.7, 0.3, 0.5};
  Exp3Options forced;
  forced.forced = {0.2, 0.3, 0.5};
  const auto e = exp3(arms, 100000, RandomSource(11), forced);
  for (int i = 0; i < 3; ++i) CHECK(std::fabs(e.estimates[i] / 100000 - arms[i]) <= 0.02);
  forced.estimator = Exp3Estimator::Gain;
  const auto eg = exp3(arms, 100000, RandomSource(12), forced);
  for (int i = 0; i < 3; ++i) CHECK(std::fabs(eg.estimates[i] / 100000 - arms[i]) <= 0.02);

  // both estimators learn the better arm on an easy instance
  for (auto est : {Exp3Estimator::Gain, Exp3Estimator::Loss}) {
    Exp3Options o;
    o.estimator = est;
    CHECK(exp3({0.9, 0.1}, 20000, RandomSource(13), o).reward > 0.8 * 20000);
  }
  forced.estimator = Exp3Estimator::Loss;
  forced.forced = {0.2, 0.3};
  CHECK_THROWS_AS(exp3(arms, 10, RandomSource(1), forced), std::invalid_argument);

  CHECK_THROWS_AS(exp3({0.5}, 10, RandomSource(1)), std::invalid_argument);
}

TEST_CASE("win-stay lose-shift") {
  const auto same = naive_switch_strategy(0.4, 0.4, 1000, RandomSource(1));
  CHECK(same.closed_form == doctest::Approx(0.4));
  const auto r = naive_switch_strategy(0.8, 0.2, 1000000, RandomSource(2));
  CHECK(r.closed_form == doctest::Approx(0.68));
  CHECK(std::fabs(r.empirical - 0.68) <= 0.005);
  CHECK(r.stationary_first == doctest::Approx(0.8));
  const auto lock = naive_switch_strategy(1.0, 0.0, 1000, RandomSource(3));
  CHECK(lock.closed_form == 1.0);
  CHECK(lock.empirical == 1.0);
  CHECK(naive_switch_strategy(1 - 1e-9, 0.0, 10, RandomSource(3)).closed_form == doctest::Approx(1.0));
  CHECK_THROWS_AS(naive_switch_strategy(1.0, 1.0, 10, RandomSource(1)), std::invalid_argument);
}
