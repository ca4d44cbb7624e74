#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "stochlab/rng.hpp"

namespace stochlab::decision {

struct Transition {
  std::size_t next;
  double prob;
  double reward = 0.0;  ///< paid on this transition, on top of the action reward
};

/// Finite controlled chain. kernel[s][a] lists the outcomes of action a in s.
struct MdpModel {
  std::size_t states = 0;
  std::size_t actions = 0;
  double gamma = 0.9;
  std::vector<std::vector<std::vector<Transition>>> kernel;
  std::vector<std::vector<double>> action_reward;  ///< R0(s,a); may be empty

  /// Throws std::invalid_argument on shape errors, bad probabilities or gamma outside (0,1].
  void validate() const;
  /// R(s,a) = R0(s,a) + sum_s' p r(s,a;s')
  double expected_reward(std::size_t s, std::size_t a) const;

  /// Dense random model: Dirichlet(1) rows, rewards uniform on [0,1).
  static MdpModel random(std::size_t states, std::size_t actions, double gamma, Rng& rng);
};

using QValues = std::vector<std::vector<double>>;

/// (HQ)(s,a) = R(s,a) + gamma sum_s' p max_a' Q(s',a')
QValues bellman_q(const MdpModel& m, const QValues& q);
double sup_distance(const QValues& a, const QValues& b);

struct ValueResult {
  std::vector<double> value;
  std::vector<std::size_t> policy;  ///< greedy, lowest index on ties
  QValues q;
  std::size_t iterations = 0;
  double residual = 0.0;  ///< ||V - H(V)||_inf at exit
};

/// Value iteration for gamma < 1. With gamma = 1 the model must reach
/// zero-reward absorbing states along an acyclic graph; it is then solved
/// by backward induction, and std::domain_error is thrown otherwise.
ValueResult value_iteration(const MdpModel& m, double tol = 1e-10, std::size_t max_iter = 10000000);

/// Value of a stationary deterministic policy, (I - gamma P_pi)^{-1} R_pi.
std::vector<double> evaluate_policy(const MdpModel& m, const std::vector<std::size_t>& policy);

// ------------------------------------------------------------------ secretary

struct SecretaryResult {
  std::size_t n = 0;
  std::vector<double> value;  ///< value[s] for s = 1..n; value[0] unused
  std::size_t threshold = 1;  ///< first position where stopping on a record is optimal
  double success = 0.0;       ///< value[1]
  double harmonic = 0.0;      ///< (s*-1)/n sum_{k=s*}^{n} 1/(k-1), or 1/n when s* = 1
};

SecretaryResult secretary_solve(std::size_t n);

/// Success rate of "skip threshold-1 candidates, then take the first record"
/// over random orders.
double secretary_simulate(std::size_t n, std::size_t threshold, std::size_t trials, const RandomSource& src);

// ------------------------------------------------------------------ bandits

struct ArmState {
  std::uint64_t wins = 0;
  std::uint64_t losses = 0;
};

/// Calibration price p at which a Beta(w,l) arm and a sure arm paying p tie.
/// Lattice w'+l' <= cap; throws std::invalid_argument when w+l >= cap.
double gittins_index(std::uint64_t w, std::uint64_t l, double gamma, std::size_t cap = 400, double tol = 1e-10);

enum class StepSchedule {
  Harmonic,   ///< 1/(1+n)
  Rescaled,   ///< 1/(1+(1-gamma) n)
  Polynomial  ///< (1+n)^-power
};

struct QLearningOptions {
  std::size_t updates = 1000000;
  double epsilon = 0.1;
  StepSchedule schedule = StepSchedule::Rescaled;
  double power = 0.7;
  std::size_t start = 0;
};

struct QTable {
  QValues q;
  std::vector<std::vector<std::uint64_t>> visits;
};

QTable q_learning(const MdpModel& m, const QLearningOptions& opt, const RandomSource& src);

/// Gain: R_i += 1/p_i when the pulled arm pays (unstable without mixing).
/// Loss: R_i += 1 - 1{pulled} (1 - x)/p_i, the same mean with bounded upward steps.
enum class Exp3Estimator { Gain, Loss };

struct Exp3Options {
  double eta = 0.0;                  ///< 0 picks sqrt(2 ln n / (N n))
  bool record_probabilities = false;
  bool record_trace = false;
  /// Pull arms from this fixed law instead of the exponential weights
  /// (checks of the reward estimator).
  std::vector<double> forced;
  Exp3Estimator estimator = Exp3Estimator::Loss;
};

struct Exp3Result {
  double eta = 0.0;
  double reward = 0.0;
  double regret = 0.0;  ///< p_max N - reward
  std::vector<double> estimates;  ///< importance-weighted reward sums R_i
  std::vector<std::size_t> arms;  ///< per round, when traced
  std::vector<double> rewards;
  std::vector<std::vector<double>> probabilities;
};

inline constexpr double kMaxImportanceWeight = 1e6;

Exp3Result exp3(const std::vector<double>& arms, std::size_t rounds, const RandomSource& src, const Exp3Options& opt = {});

struct SwitchResult {
  double empirical = 0.0;
  double closed_form = 0.0;
  double stationary_first = 0.0;  ///< long-run share of pulls on arm 1
};

/// Win-stay / lose-shift on two Bernoulli arms, starting on arm 1.
SwitchResult naive_switch_strategy(double p1, double p2, std::size_t rounds, const RandomSource& src);

}  // namespace stochlab::decision
