#include "stochlab/markov_continuous.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace stochlab::ctmc {
namespace {

using Index = Eigen::Index;

Index idx(std::size_t i) { return static_cast<Index>(i); }

}  // namespace

GeneratorMatrix::GeneratorMatrix(Matrix lambda) : m_(std::move(lambda)) {
  if (m_.rows() != m_.cols() || m_.rows() == 0) throw std::invalid_argument("generator must be square and nonempty");
  for (Index i = 0; i < m_.rows(); ++i) {
    double off = 0.0;
    for (Index j = 0; j < m_.cols(); ++j) {
      if (!std::isfinite(m_(i, j))) throw std::invalid_argument("generator entries must be finite");
      if (i != j) {
        if (m_(i, j) < 0.0) throw std::invalid_argument("off-diagonal rates must be nonnegative");
        off += m_(i, j);
      }
    }
    const double sum = off + m_(i, i);
    if (std::fabs(sum) > markov::kRenormalizeTolerance * std::max(1.0, off)) {
      throw std::invalid_argument("generator row " + std::to_string(i) + " sums to " + std::to_string(sum) +
                                  "; only conservative generators are supported");
    }
    m_(i, i) = -off;
    max_rate_ = std::max(max_rate_, off);
  }
}

StochasticMatrix transition_matrix(const GeneratorMatrix& g, double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument("transition_matrix: t must be finite and >= 0");
  const Index n = idx(g.size());
  const double c = g.max_rate();
  if (c == 0.0 || t == 0.0) return StochasticMatrix(Matrix::Identity(n, n));

  // scale so that c * h <= 1, sum the Poisson mixture, then square back up
  const double ct = c * t;
  const int squarings = ct > 1.0 ? static_cast<int>(std::ceil(std::log2(ct))) : 0;
  const double x = std::ldexp(ct, -squarings);
  const Matrix a = Matrix::Identity(n, n) + g.matrix() / c;

  double weight = std::exp(-x);
  double mass = weight;
  Matrix term = Matrix::Identity(n, n);
  Matrix p = weight * term;
  for (int k = 1; 1.0 - mass > 1e-17 && k < 200; ++k) {
    term = term * a;
    weight *= x / k;
    mass += weight;
    p += weight * term;
  }
  for (int s = 0; s < squarings; ++s) p = p * p;
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) p(i, j) = std::max(0.0, p(i, j));
    p.row(i) /= p.row(i).sum();
  }
  return StochasticMatrix(std::move(p));
}

DistributionVector solve_distribution(const GeneratorMatrix& g, const DistributionVector& p0, double t) {
  if (p0.size() != g.size()) throw std::invalid_argument("solve_distribution: dimension mismatch");
  Vector v = transition_matrix(g, t).matrix().transpose() * p0.values();
  return DistributionVector(v / v.sum());
}

StationaryResult stationary_ctmc(const GeneratorMatrix& g) {
  const Index n = idx(g.size());
  const double c = g.max_rate();
  if (c == 0.0) return markov::stationary(StochasticMatrix::identity(g.size()));
  // same null space as Lambda^T; closed classes match the jump chain's
  Matrix a = Matrix::Identity(n, n) + g.matrix() / c;
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) a(i, j) = std::max(0.0, a(i, j));
    a.row(i) /= a.row(i).sum();
  }
  StationaryResult r = markov::stationary(StochasticMatrix(std::move(a)));
  for (const auto& pi : r.per_class) {
    const double residual = (g.matrix().transpose() * pi.values()).lpNorm<1>();
    if (residual > 1e-10 * std::max(1.0, c)) throw std::runtime_error("stationary_ctmc: residual too large");
  }
  return r;
}

JumpChain embedded_chain(const GeneratorMatrix& g) {
  const std::size_t n = g.size();
  Matrix p = Matrix::Zero(idx(n), idx(n));
  std::vector<double> rates(n);
  for (std::size_t i = 0; i < n; ++i) {
    rates[i] = g.rate(i);
    if (rates[i] == 0.0) {
      p(idx(i), idx(i)) = 1.0;
      continue;
    }
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) p(idx(i), idx(j)) = g(i, j) / rates[i];
  }
  return {StochasticMatrix(std::move(p)), std::move(rates)};
}

Trajectory simulate_ctmc(const GeneratorMatrix& g, std::size_t start, double t_max, Rng& rng) {
  if (start >= g.size()) throw std::invalid_argument("simulate_ctmc: start state out of range");
  if (!(t_max >= 0.0)) throw std::invalid_argument("simulate_ctmc: t_max must be nonnegative");
  const JumpChain jc = embedded_chain(g);
  std::vector<CategoricalSampler> next(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    std::vector<double> w(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) w[j] = jc.jumps(i, j);
    next[i] = CategoricalSampler(w);
  }
  Trajectory path = Trajectory::step(static_cast<double>(start), t_max);
  std::size_t state = start;
  double t = 0.0;
  while (true) {
    const double rate = jc.holding_rates[state];
    if (rate == 0.0) break;
    t += rng.exponential(rate);
    if (t > t_max) break;
    state = next[state](rng);
    path.push_event(t, static_cast<double>(state));
  }
  return path;
}

Vector occupation_fractions(const Trajectory& path, std::size_t states) {
  if (path.kind != Trajectory::Kind::Step) throw std::invalid_argument("occupation_fractions: step path required");
  Vector f = Vector::Zero(idx(states));
  if (!(path.t_end > 0.0)) throw std::invalid_argument("occupation_fractions: zero-length path");
  for (std::size_t k = 0; k < path.size(); ++k) {
    const double end = k + 1 < path.size() ? path.times[k + 1] : path.t_end;
    const auto s = static_cast<std::size_t>(path.values[k]);
    if (s >= states) throw std::invalid_argument("occupation_fractions: state out of range");
    f(idx(s)) += end - path.times[k];
  }
  return f / path.t_end;
}

double mean_return_time_ctmc(const GeneratorMatrix& g, const DistributionVector& pi, std::size_t i) {
  if (i >= g.size() || pi.size() != g.size()) throw std::invalid_argument("mean_return_time_ctmc: bad state or size");
  if (pi[i] <= 0.0) throw std::domain_error("mean_return_time_ctmc: state has zero stationary mass");
  if (g.rate(i) == 0.0) throw std::domain_error("mean_return_time_ctmc: absorbing state never leaves");
  return 1.0 / (g.rate(i) * pi[i]);
}

GeneratorMatrix birth_death(const std::vector<double>& births, const std::vector<double>& deaths) {
  if (births.size() != deaths.size()) throw std::invalid_argument("birth_death: rate vectors differ in length");
  const std::size_t n = births.size() + 1;
  Matrix m = Matrix::Zero(idx(n), idx(n));
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (births[k] < 0.0 || deaths[k] < 0.0) throw std::invalid_argument("birth_death: rates must be nonnegative");
    m(idx(k), idx(k + 1)) = births[k];
    m(idx(k + 1), idx(k)) = deaths[k];
  }
  for (std::size_t k = 0; k < n; ++k) m(idx(k), idx(k)) = -(m.row(idx(k)).sum());
  return GeneratorMatrix(std::move(m));
}

DistributionVector birth_death_stationary(const std::vector<double>& births, const std::vector<double>& deaths) {
  if (births.size() != deaths.size()) throw std::invalid_argument("birth_death_stationary: size mismatch");
  Vector w(idx(births.size() + 1));
  w(0) = 1.0;
  for (std::size_t k = 0; k < births.size(); ++k) {
    if (!(deaths[k] > 0.0)) throw std::invalid_argument("birth_death_stationary: death rates must be positive");
    w(idx(k + 1)) = w(idx(k)) * births[k] / deaths[k];
  }
  return DistributionVector(w / w.sum());
}

double EhrenfestModel::mean_difference(double a0, std::size_t n) const {
  return std::pow(1.0 - 2.0 / static_cast<double>(particles), static_cast<double>(n)) * a0;
}

double EhrenfestModel::second_moment(double b0, std::size_t n) const {
  const auto big_n = static_cast<double>(particles);
  const double r = std::pow(1.0 - 4.0 / big_n, static_cast<double>(n));
  return r * b0 + big_n * (1.0 - r);
}

EhrenfestModel ehrenfest_model(std::size_t particles, double rate) {
  if (particles == 0) throw std::invalid_argument("ehrenfest_model: need at least one particle");
  if (!(rate > 0.0)) throw std::invalid_argument("ehrenfest_model: rate must be positive");
  const std::size_t n = particles + 1;
  std::vector<double> up(particles), down(particles);
  for (std::size_t i = 0; i < particles; ++i) {
    up[i] = rate * static_cast<double>(particles - i);
    down[i] = rate * static_cast<double>(i + 1);
  }
  Vector binom(idx(n));
  binom(0) = 1.0;
  for (std::size_t k = 1; k < n; ++k)
    binom(idx(k)) = binom(idx(k - 1)) * static_cast<double>(particles - k + 1) / static_cast<double>(k);
  const double total = std::ldexp(1.0, static_cast<int>(particles));
  return {particles,
          rate,
          birth_death(up, down),
          DistributionVector(binom / total),
          total,
          total / (rate * static_cast<double>(particles))};
}

QueueResult mmN_queue(double lambda, double mu, std::size_t servers) {
  if (!(lambda > 0.0) || !(mu > 0.0)) throw std::invalid_argument("mmN_queue: rates must be positive");
  if (servers == 0) throw std::invalid_argument("mmN_queue: need at least one server");
  std::vector<double> births(servers, lambda), deaths(servers);
  for (std::size_t j = 0; j < servers; ++j) deaths[j] = mu * static_cast<double>(j + 1);
  DistributionVector pi = birth_death_stationary(births, deaths);
  double busy = 0.0;
  for (std::size_t j = 0; j <= servers; ++j) busy += static_cast<double>(j) * pi[j];
  return {std::move(pi), busy};
}

double queue_profit(const QueueResult& q, std::size_t servers, double reward_per_busy, double cost_per_server) {
  return reward_per_busy * q.mean_busy - cost_per_server * static_cast<double>(servers);
}

double GeometricLaw::pmf(std::size_t j) const { return (1.0 - p) * std::pow(p, static_cast<double>(j)); }

GeometricLaw bus_stop_queue(double lambda, double mu) {
  if (!(lambda > 0.0) || !(mu > 0.0)) throw std::invalid_argument("bus_stop_queue: rates must be positive");
  return {lambda / (lambda + mu)};
}

GeneratorMatrix bus_stop_generator(double lambda, double mu, std::size_t cap) {
  if (!(lambda > 0.0) || !(mu > 0.0)) throw std::invalid_argument("bus_stop_generator: rates must be positive");
  const std::size_t n = cap + 1;
  Matrix m = Matrix::Zero(idx(n), idx(n));
  for (std::size_t j = 0; j < n; ++j) {
    if (j + 1 < n) m(idx(j), idx(j + 1)) = lambda;
    if (j > 0) m(idx(j), 0) = mu;
    m(idx(j), idx(j)) = -m.row(idx(j)).sum();
  }
  return GeneratorMatrix(std::move(m));
}

}  // namespace stochlab::ctmc
