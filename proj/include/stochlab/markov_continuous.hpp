#pragma once

#include <cstddef>
#include <vector>

#include "stochlab/markov_discrete.hpp"
#include "stochlab/rng.hpp"
#include "stochlab/trajectory.hpp"

namespace stochlab::ctmc {

using markov::DistributionVector;
using markov::Matrix;
using markov::StationaryResult;
using markov::StochasticMatrix;
using markov::Vector;

/// Conservative generator of a finite continuous-time chain.
class GeneratorMatrix {
 public:
  /// Off-diagonal entries must be finite and nonnegative. Rows whose sum is
  /// within 1e-9 * max(1, lambda_i) of zero get their diagonal reset to
  /// -sum(off-diagonal); anything worse throws std::invalid_argument.
  explicit GeneratorMatrix(Matrix lambda);

  std::size_t size() const noexcept { return static_cast<std::size_t>(m_.rows()); }
  double operator()(std::size_t i, std::size_t j) const {
    return m_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  /// lambda_i = -Lambda_ii, the total exit rate of state i.
  double rate(std::size_t i) const { return -(*this)(i, i); }
  double max_rate() const noexcept { return max_rate_; }
  const Matrix& matrix() const noexcept { return m_; }

 private:
  Matrix m_;
  double max_rate_ = 0.0;
};

struct JumpChain {
  StochasticMatrix jumps;             ///< p_ij = Lambda_ij / lambda_i, self-loop for absorbing states
  std::vector<double> holding_rates;  ///< lambda_i
};

/// exp(t Lambda) by uniformization. Throws std::invalid_argument for t < 0.
StochasticMatrix transition_matrix(const GeneratorMatrix& g, double t);

/// P(t)^T p0.
DistributionVector solve_distribution(const GeneratorMatrix& g, const DistributionVector& p0, double t);

/// Solutions of Lambda^T pi = 0, one per closed class.
StationaryResult stationary_ctmc(const GeneratorMatrix& g);

JumpChain embedded_chain(const GeneratorMatrix& g);

/// Gillespie path: Exp(lambda_i) holding times, jump-chain moves, cut at
/// t_max. Values are state indices stored as doubles.
Trajectory simulate_ctmc(const GeneratorMatrix& g, std::size_t start, double t_max, Rng& rng);

/// Fraction of [0, t_end] spent in each state along a step path.
Vector occupation_fractions(const Trajectory& path, std::size_t states);

/// 1 / (lambda_i pi_i). Throws std::domain_error when pi_i or lambda_i is zero.
double mean_return_time_ctmc(const GeneratorMatrix& g, const DistributionVector& pi, std::size_t i);

/// Generator of a birth-death chain on {0..n}: births[k] is the rate k -> k+1
/// (k < n), deaths[k] the rate k+1 -> k.
GeneratorMatrix birth_death(const std::vector<double>& births, const std::vector<double>& deaths);

/// pi_k proportional to prod_{j<k} births[j] / deaths[j].
DistributionVector birth_death_stationary(const std::vector<double>& births, const std::vector<double>& deaths);

struct EhrenfestModel {
  std::size_t particles;
  double rate;
  GeneratorMatrix generator;
  DistributionVector stationary;  ///< binomial(N, 1/2)
  double return_time_discrete;    ///< 2^N steps for state 0 of the jump chain
  double return_time_continuous;  ///< 2^N / (lambda N)

  /// E(2 X_n - N) of the discrete chain after n steps.
  double mean_difference(double a0, std::size_t n) const;
  /// E(2 X_n - N)^2 after n steps.
  double second_moment(double b0, std::size_t n) const;
};

EhrenfestModel ehrenfest_model(std::size_t particles, double rate);

struct QueueResult {
  DistributionVector stationary;
  double mean_busy;  ///< sum_j j pi_j
};

/// N-server loss system: pi_j proportional to (lambda/mu)^j / j!, j = 0..N.
QueueResult mmN_queue(double lambda, double mu, std::size_t servers);

/// A sum_j j pi_j - B N.
double queue_profit(const QueueResult& q, std::size_t servers, double reward_per_busy, double cost_per_server);

struct GeometricLaw {
  double p;  ///< ratio lambda / (lambda + mu)

  double pmf(std::size_t j) const;
  double mean() const { return p / (1.0 - p); }
};

/// Waiting passengers at a bus stop: arrivals at rate lambda, a bus every
/// Exp(mu) empties the stop.
GeometricLaw bus_stop_queue(double lambda, double mu);

/// Generator of the bus-stop chain cut at `cap` waiting passengers.
GeneratorMatrix bus_stop_generator(double lambda, double mu, std::size_t cap);

}  // namespace stochlab::ctmc
