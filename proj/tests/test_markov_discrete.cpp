#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <numeric>

#include "stochlab/markov_discrete.hpp"

using namespace stochlab;
using namespace stochlab::markov;

namespace {

StochasticMatrix two_state() {
  Matrix m(2, 2);
  m << 0.5, 0.5, 1.0, 0.0;
  return StochasticMatrix(m);
}

StochasticMatrix swap_chain() {
  Matrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return StochasticMatrix(m);
}

// random chain with a self-loop at 0 and a cycle through every state, so it
// is irreducible and aperiodic
StochasticMatrix random_ergodic(Rng& rng, std::size_t n) {
  Matrix m = Matrix::Zero(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j)
      if (rng.uniform() < 0.4) m(i, j) = rng.uniform();
    m(i, (i + 1) % n) += 0.1 + rng.uniform();
  }
  m(0, 0) += 0.2;
  for (std::size_t i = 0; i < n; ++i) m.row(i) /= m.row(i).sum();
  return StochasticMatrix(m);
}

Matrix brute_power(const Matrix& p, int n) {
  Matrix r = Matrix::Identity(p.rows(), p.cols());
  for (int k = 0; k < n; ++k) r = r * p;
  return r;
}

}  // namespace

TEST_CASE("validation and renormalization") {
  Matrix bad(2, 2);
  bad << 0.5, 0.6, 1.0, 0.0;
  CHECK_THROWS_AS(StochasticMatrix{bad}, std::invalid_argument);
  Matrix neg(2, 2);
  neg << 1.5, -0.5, 1.0, 0.0;
  CHECK_THROWS_AS(StochasticMatrix{neg}, std::invalid_argument);
  Matrix near(2, 2);
  near << 0.5, 0.5 + 1e-11, 1.0, 0.0;
  StochasticMatrix p(near);
  CHECK(std::fabs(p.matrix().row(0).sum() - 1.0) < 1e-15);
  CHECK_THROWS_AS(StochasticMatrix{Matrix(2, 3)}, std::invalid_argument);
  CHECK_THROWS_AS(DistributionVector{Vector::Constant(2, 0.6)}, std::invalid_argument);
}

TEST_CASE("evolve worked example") {
  const auto p = two_state();
  const auto p0 = DistributionVector::point_mass(2, 1);
  const auto p1 = evolve(p, p0, 1);
  CHECK(p1[0] == 1.0);
  CHECK(p1[1] == 0.0);
  const auto p3 = evolve(p, p0, 3);
  CHECK(p3[0] == 0.75);
  CHECK(p3[1] == 0.25);
  const auto id = StochasticMatrix::identity(3);
  DistributionVector q(Vector::LinSpaced(3, 1, 3) / 6.0);
  CHECK((evolve(id, q, 17).values() - q.values()).norm() == 0.0);

  // Chapman-Kolmogorov composition
  Rng rng(RandomSource(1));
  const auto r = random_ergodic(rng, 6);
  const auto u = DistributionVector::uniform(6);
  CHECK((evolve(r, u, 12).values() - evolve(r, evolve(r, u, 5), 7).values()).lpNorm<1>() < 1e-13);
}

TEST_CASE("classification") {
  auto c = classify(swap_chain());
  CHECK(c.classes.size() == 1);
  CHECK(c.closed[0]);
  CHECK(c.period[0] == 2);

  c = classify(two_state());
  CHECK(c.irreducible());
  CHECK(c.period[0] == 1);

  c = classify(StochasticMatrix::identity(2));
  CHECK(c.classes.size() == 2);
  CHECK(c.closed[0]);
  CHECK(c.closed[1]);
  CHECK(c.period[0] == 1);
  CHECK(c.period[1] == 1);

  c = classify(gambler_ruin_chain(0.5, 3));
  CHECK(c.classes.size() == 3);
  CHECK(c.essential[0]);
  CHECK_FALSE(c.essential[1]);
  CHECK_FALSE(c.essential[2]);
  CHECK(c.essential[3]);
  CHECK(c.class_of[1] == c.class_of[2]);

  // 3-cycle period 3, hypercube period 2
  Matrix rot = Matrix::Zero(3, 3);
  rot(0, 1) = rot(1, 2) = rot(2, 0) = 1.0;
  CHECK(classify(StochasticMatrix(rot)).period[0] == 3);
  CHECK(classify(hypercube_walk(3)).period[0] == 2);
}

TEST_CASE("classification is consistent under relabelling") {
  Rng rng(RandomSource(77));
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + rng.below(7);
    Matrix m = Matrix::Zero(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j)
        if (rng.uniform() < 0.25) m(i, j) = 1.0;
      if (m.row(i).sum() == 0) m(i, rng.below(n)) = 1.0;
      m.row(i) /= m.row(i).sum();
    }
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    Matrix pm(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) pm(perm[i], perm[j]) = m(i, j);
    const auto a = classify(StochasticMatrix(m));
    const auto b = classify(StochasticMatrix(pm));
    REQUIRE(a.classes.size() == b.classes.size());
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(a.essential[i] == b.essential[perm[i]]);
      CHECK(a.period[a.class_of[i]] == b.period[b.class_of[perm[i]]]);
      for (std::size_t j = 0; j < n; ++j)
        CHECK((a.class_of[i] == a.class_of[j]) == (b.class_of[perm[i]] == b.class_of[perm[j]]));
    }
  }
}

TEST_CASE("stationary distributions") {
  auto st = stationary(two_state());
  REQUIRE(st.per_class.size() == 1);
  CHECK(std::fabs(st.per_class[0][0] - 2.0 / 3.0) < 1e-12);
  CHECK(std::fabs(st.per_class[0][1] - 1.0 / 3.0) < 1e-12);

  Matrix ds(3, 3);
  ds << 0.2, 0.3, 0.5, 0.5, 0.2, 0.3, 0.3, 0.5, 0.2;
  st = stationary(StochasticMatrix(ds));
  for (int i = 0; i < 3; ++i) CHECK(std::fabs(st.per_class[0][i] - 1.0 / 3.0) < 1e-12);

  st = stationary(hypercube_walk(3));
  for (int i = 0; i < 8; ++i) CHECK(std::fabs(st.per_class[0][i] - 0.125) < 1e-12);

  st = stationary(gambler_ruin_chain(0.4, 4));
  REQUIRE(st.per_class.size() == 2);
  CHECK(st.per_class[0][0] == 1.0);
  CHECK(st.per_class[1][4] == 1.0);

  Rng rng(RandomSource(5));
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = random_ergodic(rng, 2 + rng.below(10));
    const auto pi = stationary(p).per_class[0].values();
    CHECK((p.matrix().transpose() * pi - pi).lpNorm<1>() <= 1e-10);
  }
}

TEST_CASE("limiting distribution and Cesaro averages") {
  const auto p = gambler_ruin_chain(0.5, 3);
  const auto lim = limiting_distribution(p, DistributionVector::point_mass(4, 1));
  CHECK(std::fabs(lim[0] - 2.0 / 3.0) < 1e-12);
  CHECK(std::fabs(lim[3] - 1.0 / 3.0) < 1e-12);
  CHECK(std::fabs(lim[0] - gambler_ruin(0.5, 1, 3)) < 1e-12);

  // p != 1/2 cross-checked with the closed form
  const auto q = gambler_ruin_chain(0.6, 5);
  for (std::size_t k = 0; k <= 5; ++k) {
    const auto l = limiting_distribution(q, DistributionVector::point_mass(6, k));
    CHECK(std::fabs(l[0] - gambler_ruin(0.6, k, 5)) < 1e-12);
  }

  const auto t = two_state();
  const auto from_pi = limiting_distribution(t, stationary(t).per_class[0]);
  CHECK(std::fabs(from_pi[0] - 2.0 / 3.0) < 1e-12);

  CHECK_THROWS_AS(limiting_distribution(swap_chain(), DistributionVector::point_mass(2, 0)), std::domain_error);
  const auto ces = cesaro_average(swap_chain(), DistributionVector::point_mass(2, 0), 10000);
  CHECK(std::fabs(ces[0] - 0.5) < 1e-4);
}

TEST_CASE("Doeblin bound") {
  const auto d = doeblin_bound(two_state());
  CHECK(d.n0 == 1);
  CHECK(d.delta == 0.5);
  CHECK(d.column == 0);
  const Matrix p = two_state().matrix();
  const Vector pi = stationary(two_state()).per_class[0].values();
  for (int n = 0; n <= 40; ++n) {
    const Matrix pn = brute_power(p, n);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) CHECK(std::fabs(pn(i, j) - pi(j)) <= std::pow(0.5, n) + 1e-15);
  }
  CHECK_THROWS_AS(doeblin_bound(swap_chain()), std::domain_error);
  const auto flat = doeblin_bound(StochasticMatrix(Matrix::Constant(4, 4, 0.25)));
  CHECK(flat.n0 == 1);
  CHECK(flat.delta == 0.25);
}

TEST_CASE("spectral gap") {
  const auto g = spectral_gap(two_state());
  CHECK(std::fabs(g.gap - 0.5) < 1e-12);
  CHECK(g.ergodic);
  const auto id = spectral_gap(StochasticMatrix::identity(3));
  CHECK(id.gap == doctest::Approx(0.0));
  CHECK_FALSE(id.ergodic);
  CHECK_FALSE(spectral_gap(swap_chain()).ergodic);

  Rng rng(RandomSource(8));
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 3 + rng.below(6);
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) m(i, j) = rng.uniform() < 0.5 ? rng.uniform() : 0.0;
      m(i, (i + 1) % n) += 0.5;
      m.row(i) /= m.row(i).sum();
    }
    const double delta = 0.15;
    const Matrix tele = (1 - delta) * m + delta * Matrix::Constant(n, n, 1.0 / n);
    CHECK(spectral_gap(StochasticMatrix(tele)).gap >= delta - 1e-10);
  }
}

TEST_CASE("detailed balance") {
  const auto e = ehrenfest_discrete(6);
  Vector binom(7);
  for (int k = 0; k <= 6; ++k) binom(k) = std::tgamma(7.0) / (std::tgamma(k + 1.0) * std::tgamma(7.0 - k)) / 64.0;
  CHECK(detailed_balance(e, DistributionVector(binom)).reversible);

  Matrix rot = Matrix::Zero(3, 3);
  rot(0, 1) = rot(1, 2) = rot(2, 0) = 1.0;
  const auto bc = detailed_balance(StochasticMatrix(rot), DistributionVector::uniform(3));
  CHECK_FALSE(bc.reversible);
  CHECK(std::fabs(bc.max_violation - 1.0 / 3.0) < 1e-15);

  Matrix sym(3, 3);
  sym << 0.2, 0.5, 0.3, 0.5, 0.1, 0.4, 0.3, 0.4, 0.3;
  CHECK(detailed_balance(StochasticMatrix(sym), DistributionVector::uniform(3)).reversible);
}

TEST_CASE("hitting and return times") {
  const auto h = hitting_times(two_state());
  CHECK(std::fabs(h.return_times(0) - 1.5) < 1e-12);
  CHECK(std::fabs(h.return_times(1) - 3.0) < 1e-12);
  CHECK(std::fabs(h.mean_hitting(1, 0) - 1.0) < 1e-12);
  CHECK(std::fabs(h.mean_hitting(0, 1) - 2.0) < 1e-12);

  const auto ruin = hitting_times(gambler_ruin_chain(0.5, 3));
  CHECK(ruin.return_times(0) == 1.0);
  CHECK(std::isinf(ruin.return_times(1)));
  CHECK(std::isinf(ruin.mean_hitting(1, 0)));  // may be absorbed at 3 instead
  CHECK(std::isinf(ruin.mean_hitting(0, 3)));

  const auto e = hitting_times(ehrenfest_discrete(4));
  CHECK(std::fabs(e.return_times(0) - 16.0) < 1e-8);

  Rng rng(RandomSource(21));
  for (int trial = 0; trial < 30; ++trial) {
    const auto p = random_ergodic(rng, 2 + rng.below(8));
    const auto pi = stationary(p).per_class[0];
    const auto ht = hitting_times(p);
    for (std::size_t i = 0; i < p.size(); ++i) CHECK(std::fabs(ht.return_times(i) * pi[i] - 1.0) < 1e-8);
  }
}

TEST_CASE("occupation frequencies and entropy rate") {
  Rng rng(RandomSource(2));
  const auto occ = simulate_occupation(two_state(), 0, 1000000, rng);
  CHECK(std::fabs(occ.frequencies(0) - 2.0 / 3.0) < 0.005);
  CHECK(std::fabs(occ.frequencies(1) - 1.0 / 3.0) < 0.005);
  CHECK(std::fabs(occ.empirical_entropy_rate() - 2.0 / 3.0) < 0.02);

  const auto absorb = simulate_occupation(gambler_ruin_chain(0.5, 3), 3, 1000, rng);
  CHECK(absorb.frequencies(3) == 1.0);

  CHECK(std::fabs(entropy_rate(two_state(), stationary(two_state()).per_class[0]) - 2.0 / 3.0) < 1e-12);
  CHECK(entropy_rate(StochasticMatrix(Matrix::Constant(2, 2, 0.5)), DistributionVector::uniform(2)) == 1.0);
  CHECK(entropy_rate(swap_chain(), DistributionVector::uniform(2)) == 0.0);
}

TEST_CASE("gambler's ruin closed forms") {
  CHECK(std::fabs(gambler_ruin(0.6, 1, std::nullopt) - 2.0 / 3.0) < 1e-15);
  CHECK(gambler_ruin(0.5, 7, std::nullopt) == 1.0);
  CHECK(gambler_ruin(0.3, 0, 5) == 1.0);
  CHECK(gambler_ruin(0.3, 5, 5) == 0.0);
  CHECK_THROWS_AS(gambler_ruin(1.0, 1, 5), std::invalid_argument);
  CHECK_THROWS_AS(gambler_ruin(0.4, 6, 5), std::invalid_argument);
}

TEST_CASE("sparse chain agrees with dense") {
  Rng rng(RandomSource(4));
  const auto p = random_ergodic(rng, 7);
  std::vector<std::vector<SparseStochasticMatrix::Entry>> rows(7);
  for (std::size_t i = 0; i < 7; ++i)
    for (std::size_t j = 0; j < 7; ++j)
      if (p(i, j) > 0) rows[i].push_back({j, p(i, j)});
  const SparseStochasticMatrix sp(rows);
  const auto u = DistributionVector::point_mass(7, 2);
  CHECK((evolve(p, u, 9).values() - evolve(sp, u, 9).values()).lpNorm<1>() < 1e-13);
  const auto a = classify(p), b = classify(sp);
  CHECK(a.class_of == b.class_of);
  CHECK(a.period == b.period);
}
