#include "stochlab/decision.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Dense>

#include "stochlab/parallel.hpp"

namespace stochlab::decision {

void MdpModel::validate() const {
  if (states == 0 || actions == 0) throw std::invalid_argument("MdpModel: need at least one state and one action");
  if (!(gamma > 0.0 && gamma <= 1.0)) throw std::invalid_argument("MdpModel: gamma must lie in (0, 1]");
  if (kernel.size() != states) throw std::invalid_argument("MdpModel: kernel has wrong number of states");
  if (!action_reward.empty() && action_reward.size() != states)
    throw std::invalid_argument("MdpModel: reward table has wrong number of states");
  for (std::size_t s = 0; s < states; ++s) {
    if (kernel[s].size() != actions) throw std::invalid_argument("MdpModel: kernel has wrong number of actions");
    if (!action_reward.empty() && action_reward[s].size() != actions)
      throw std::invalid_argument("MdpModel: reward table has wrong number of actions");
    for (std::size_t a = 0; a < actions; ++a) {
      double total = 0.0;
      for (const auto& t : kernel[s][a]) {
        if (t.next >= states) throw std::invalid_argument("MdpModel: successor out of range");
        if (!(t.prob >= 0.0)) throw std::invalid_argument("MdpModel: negative probability");
        if (!std::isfinite(t.reward)) throw std::invalid_argument("MdpModel: reward must be finite");
        total += t.prob;
      }
      if (std::fabs(total - 1.0) > 1e-9)
        throw std::invalid_argument("MdpModel: probabilities of (" + std::to_string(s) + ", " + std::to_string(a) +
                                    ") do not sum to 1");
    }
  }
}

double MdpModel::expected_reward(std::size_t s, std::size_t a) const {
  double r = action_reward.empty() ? 0.0 : action_reward[s][a];
  for (const auto& t : kernel[s][a]) r += t.prob * t.reward;
  return r;
}

MdpModel MdpModel::random(std::size_t states, std::size_t actions, double gamma, Rng& rng) {
  MdpModel m;
  m.states = states;
  m.actions = actions;
  m.gamma = gamma;
  m.kernel.assign(states, std::vector<std::vector<Transition>>(actions));
  m.action_reward.assign(states, std::vector<double>(actions));
  for (std::size_t s = 0; s < states; ++s) {
    for (std::size_t a = 0; a < actions; ++a) {
      std::vector<double> w(states);
      double total = 0.0;
      for (auto& x : w) total += (x = rng.exponential(1.0));
      for (std::size_t j = 0; j < states; ++j) m.kernel[s][a].push_back({j, w[j] / total, 0.0});
      m.action_reward[s][a] = rng.uniform();
    }
  }
  return m;
}

namespace {

double max_of(const std::vector<double>& row) { return *std::max_element(row.begin(), row.end()); }

std::size_t argmax(const std::vector<double>& row) {
  return static_cast<std::size_t>(std::max_element(row.begin(), row.end()) - row.begin());
}

QValues q_from_values(const MdpModel& m, const std::vector<double>& v) {
  QValues q(m.states, std::vector<double>(m.actions));
  for (std::size_t s = 0; s < m.states; ++s)
    for (std::size_t a = 0; a < m.actions; ++a) {
      double acc = 0.0;
      for (const auto& t : m.kernel[s][a]) acc += t.prob * v[t.next];
      q[s][a] = m.expected_reward(s, a) + m.gamma * acc;
    }
  return q;
}

ValueResult finish(const MdpModel& m, std::vector<double> v, std::size_t iterations) {
  ValueResult r;
  r.q = q_from_values(m, v);
  r.policy.resize(m.states);
  double res = 0.0;
  for (std::size_t s = 0; s < m.states; ++s) {
    r.policy[s] = argmax(r.q[s]);
    res = std::max(res, std::fabs(max_of(r.q[s]) - v[s]));
  }
  r.value = std::move(v);
  r.iterations = iterations;
  r.residual = res;
  return r;
}

// gamma = 1: terminal states loop on themselves with zero reward under every
// action; everything else must be acyclic.
ValueResult backward_induction(const MdpModel& m) {
  const std::size_t n = m.states;
  std::vector<char> terminal(n, 1);
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t a = 0; a < m.actions && terminal[s]; ++a)
      for (const auto& t : m.kernel[s][a])
        if (t.prob > 0.0 && t.next != s) terminal[s] = 0;
  for (std::size_t s = 0; s < n; ++s)
    if (terminal[s])
      for (std::size_t a = 0; a < m.actions; ++a)
        if (m.expected_reward(s, a) != 0.0)
          throw std::domain_error("value_iteration: gamma = 1 with a rewarding absorbing state");

  // depth-first topological order over positive-probability edges
  std::vector<int> mark(n, 0);
  std::vector<std::size_t> order;
  order.reserve(n);
  for (std::size_t root = 0; root < n; ++root) {
    if (mark[root]) continue;
    std::vector<std::pair<std::size_t, std::size_t>> stack{{root, 0}};
    mark[root] = 1;
    while (!stack.empty()) {
      auto& [s, pos] = stack.back();
      std::vector<std::size_t> succ;
      if (!terminal[s])
        for (std::size_t a = 0; a < m.actions; ++a)
          for (const auto& t : m.kernel[s][a])
            if (t.prob > 0.0) succ.push_back(t.next);
      if (pos < succ.size()) {
        const std::size_t nxt = succ[pos++];
        if (mark[nxt] == 1) throw std::domain_error("value_iteration: gamma = 1 on a model with cycles");
        if (mark[nxt] == 0) {
          mark[nxt] = 1;
          stack.push_back({nxt, 0});
        }
      } else {
        mark[s] = 2;
        order.push_back(s);
        stack.pop_back();
      }
    }
  }
  std::vector<double> v(n, 0.0);
  for (std::size_t s : order) {  // successors come first
    if (terminal[s]) continue;
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < m.actions; ++a) {
      double acc = m.expected_reward(s, a);
      for (const auto& t : m.kernel[s][a]) acc += t.prob * v[t.next];
      best = std::max(best, acc);
    }
    v[s] = best;
  }
  return finish(m, std::move(v), 1);
}

}  // namespace

QValues bellman_q(const MdpModel& m, const QValues& q) {
  std::vector<double> v(m.states);
  for (std::size_t s = 0; s < m.states; ++s) v[s] = max_of(q[s]);
  return q_from_values(m, v);
}

double sup_distance(const QValues& a, const QValues& b) {
  double d = 0.0;
  for (std::size_t s = 0; s < a.size(); ++s)
    for (std::size_t k = 0; k < a[s].size(); ++k) d = std::max(d, std::fabs(a[s][k] - b[s][k]));
  return d;
}

ValueResult value_iteration(const MdpModel& m, double tol, std::size_t max_iter) {
  m.validate();
  if (!(tol > 0.0)) throw std::invalid_argument("value_iteration: tol must be positive");
  if (m.gamma == 1.0) return backward_induction(m);
  std::vector<double> v(m.states, 0.0), next(m.states);
  for (std::size_t it = 1; it <= max_iter; ++it) {
    const auto q = q_from_values(m, v);
    double diff = 0.0;
    for (std::size_t s = 0; s < m.states; ++s) {
      next[s] = max_of(q[s]);
      diff = std::max(diff, std::fabs(next[s] - v[s]));
    }
    v.swap(next);
    // the returned V = H(V_old) has residual at most gamma * diff
    if (m.gamma * diff <= tol) return finish(m, std::move(v), it);
  }
  throw std::runtime_error("value_iteration: no convergence");
}

std::vector<double> evaluate_policy(const MdpModel& m, const std::vector<std::size_t>& policy) {
  m.validate();
  if (policy.size() != m.states) throw std::invalid_argument("evaluate_policy: policy has wrong size");
  const auto n = static_cast<Eigen::Index>(m.states);
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd r(n);
  for (std::size_t s = 0; s < m.states; ++s) {
    const std::size_t act = policy[s];
    if (act >= m.actions) throw std::invalid_argument("evaluate_policy: action out of range");
    r(static_cast<Eigen::Index>(s)) = m.expected_reward(s, act);
    for (const auto& t : m.kernel[s][act]) a(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(t.next)) -= m.gamma * t.prob;
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  if (!lu.isInvertible()) throw std::domain_error("evaluate_policy: value is not finite for this policy");
  const Eigen::VectorXd v = lu.solve(r);
  return {v.data(), v.data() + v.size()};
}

// ------------------------------------------------------------------ secretary

SecretaryResult secretary_solve(std::size_t n) {
  if (n < 1) throw std::invalid_argument("secretary_solve: N must be >= 1");
  SecretaryResult r;
  r.n = n;
  r.value.assign(n + 1, 0.0);
  const double nd = static_cast<double>(n);
  r.value[n] = 1.0;
  double tail = 0.0;  // sum_{s' > s} V(s') / (s'(s'-1))
  std::vector<char> stop(n + 1, 0);
  stop[n] = 1;
  for (std::size_t s = n - 1; s >= 1; --s) {
    const double sp = static_cast<double>(s + 1);
    tail += r.value[s + 1] / (sp * (sp - 1.0));
    const double sd = static_cast<double>(s);
    const double cont = sd * tail;
    const double now = sd / nd;
    stop[s] = now >= cont;
    r.value[s] = std::max(now, cont);
  }
  r.threshold = n;
  for (std::size_t s = 1; s <= n; ++s)
    if (stop[s]) {
      r.threshold = s;
      break;
    }
  r.success = r.value[1];
  if (r.threshold == 1) {
    r.harmonic = 1.0 / nd;
  } else {
    double h = 0.0;
    for (std::size_t k = n; k >= r.threshold; --k) h += 1.0 / static_cast<double>(k - 1);
    r.harmonic = static_cast<double>(r.threshold - 1) / nd * h;
  }
  return r;
}

double secretary_simulate(std::size_t n, std::size_t threshold, std::size_t trials, const RandomSource& src) {
  if (n < 1 || threshold < 1 || threshold > n) throw std::invalid_argument("secretary_simulate: need 1 <= threshold <= N");
  if (trials < 1) throw std::invalid_argument("secretary_simulate: need at least one trial");
  std::vector<char> win(trials, 0);
  parallel_for(trials, [&](std::size_t k) {
    Rng rng = src.child(k).stream();
    // i.i.d. uniform qualities give a uniformly random order
    double best_skipped = -1.0, chosen = -1.0, best = -1.0;
    for (std::size_t i = 1; i <= n; ++i) {
      const double x = rng.uniform();
      if (i < threshold) {
        best_skipped = std::max(best_skipped, x);
      } else if (chosen < 0.0 && x > best_skipped && x > best) {
        chosen = x;
      }
      best = std::max(best, x);
    }
    win[k] = chosen >= 0.0 && chosen == best;
  });
  std::size_t wins = 0;
  for (char w : win) wins += static_cast<std::size_t>(w);
  return static_cast<double>(wins) / static_cast<double>(trials);
}

// ------------------------------------------------------------------ Gittins

double gittins_index(std::uint64_t w, std::uint64_t l, double gamma, std::size_t cap, double tol) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("gittins_index: gamma must lie in (0, 1)");
  if (w + l >= cap) throw std::invalid_argument("gittins_index: lattice cap must exceed w + l");
  if (!(tol > 0.0)) throw std::invalid_argument("gittins_index: tol must be positive");
  const std::size_t depth = cap - static_cast<std::size_t>(w + l);
  const double scale = 1.0 / (1.0 - gamma);
  const double wd = static_cast<double>(w), ld = static_cast<double>(l);

  // continuation value at (w, l) minus the retirement value p/(1-gamma)
  std::vector<double> layer(depth + 1), above(depth + 1);
  const auto advantage = [&](double p) {
    // boundary layer: i extra wins, depth - i extra losses
    for (std::size_t i = 0; i <= depth; ++i) {
      const double ww = wd + static_cast<double>(i), tot = static_cast<double>(cap);
      above[i] = scale * std::max(p, ww / tot);
    }
    double cont = 0.0;
    for (std::size_t d = depth; d-- > 0;) {
      const double tot = wd + ld + static_cast<double>(d);
      for (std::size_t i = 0; i <= d; ++i) {
        const double ww = wd + static_cast<double>(i);
        const double q = (ww + 1.0) / (tot + 2.0);
        cont = q * (1.0 + gamma * above[i + 1]) + (1.0 - q) * gamma * above[i];
        layer[i] = std::max(p * scale, cont);
      }
      std::swap(layer, above);
    }
    return cont - p * scale;
  };

  double lo = 0.0, hi = 1.0;
  if (!(advantage(lo) > 0.0) || advantage(hi) > 0.0) throw std::runtime_error("gittins_index: index not bracketed");
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (advantage(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// ------------------------------------------------------------------ Q-learning

QTable q_learning(const MdpModel& m, const QLearningOptions& opt, const RandomSource& src) {
  m.validate();
  if (m.gamma >= 1.0) throw std::invalid_argument("q_learning: gamma must be below 1");
  if (!(opt.epsilon > 0.0 && opt.epsilon <= 1.0)) throw std::invalid_argument("q_learning: epsilon must lie in (0, 1]");
  if (opt.start >= m.states) throw std::invalid_argument("q_learning: start state out of range");
  QTable t;
  t.q.assign(m.states, std::vector<double>(m.actions, 0.0));
  t.visits.assign(m.states, std::vector<std::uint64_t>(m.actions, 0));

  std::vector<std::vector<CategoricalSampler>> next(m.states);
  for (std::size_t s = 0; s < m.states; ++s)
    for (std::size_t a = 0; a < m.actions; ++a) {
      std::vector<double> w;
      for (const auto& tr : m.kernel[s][a]) w.push_back(tr.prob);
      next[s].emplace_back(w);
    }

  Rng rng = src.stream();
  std::size_t s = opt.start;
  for (std::size_t k = 0; k < opt.updates; ++k) {
    const std::size_t a = rng.uniform() < opt.epsilon ? rng.below(m.actions) : argmax(t.q[s]);
    const auto& tr = m.kernel[s][a][next[s][a](rng)];
    const double r = (m.action_reward.empty() ? 0.0 : m.action_reward[s][a]) + tr.reward;
    const double n = static_cast<double>(t.visits[s][a]);
    double alpha = 0.0;
    switch (opt.schedule) {
      case StepSchedule::Harmonic: alpha = 1.0 / (1.0 + n); break;
      case StepSchedule::Rescaled: alpha = 1.0 / (1.0 + (1.0 - m.gamma) * n); break;
      case StepSchedule::Polynomial: alpha = std::pow(1.0 + n, -opt.power); break;
    }
    t.q[s][a] += alpha * (r + m.gamma * max_of(t.q[tr.next]) - t.q[s][a]);
    ++t.visits[s][a];
    s = tr.next;
  }
  return t;
}

// ------------------------------------------------------------------ Exp3

Exp3Result exp3(const std::vector<double>& arms, std::size_t rounds, const RandomSource& src, const Exp3Options& opt) {
  const std::size_t n = arms.size();
  if (n < 2) throw std::invalid_argument("exp3: need at least two arms");
  if (rounds < 1) throw std::invalid_argument("exp3: need at least one round");
  for (double p : arms)
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("exp3: arm probabilities must lie in [0, 1]");
  const double nd = static_cast<double>(n);
  Exp3Result out;
  out.eta = opt.eta > 0.0 ? opt.eta : std::sqrt(2.0 * std::log(nd) / (static_cast<double>(rounds) * nd));
  out.estimates.assign(n, 0.0);
  if (!opt.forced.empty()) {
    if (opt.forced.size() != n) throw std::invalid_argument("exp3: forced law has wrong size");
    double total = 0.0;
    for (double p : opt.forced) {
      if (!(p > 0.0)) throw std::invalid_argument("exp3: forced law must be positive");
      total += p;
    }
    if (std::fabs(total - 1.0) > 1e-12) throw std::invalid_argument("exp3: forced law must sum to 1");
  }
  std::vector<double> prob(n);
  Rng rng = src.stream();
  for (std::size_t t = 0; t < rounds; ++t) {
    if (opt.forced.empty()) {
      // log-sum-exp shift keeps the weights finite
      const double top = *std::max_element(out.estimates.begin(), out.estimates.end());
      double z = 0.0;
      for (std::size_t i = 0; i < n; ++i) z += (prob[i] = std::exp(out.eta * (out.estimates[i] - top)));
      for (auto& p : prob) p /= z;
    } else {
      prob = opt.forced;
    }
    double u = rng.uniform(), c = 0.0;
    std::size_t arm = n - 1;
    for (std::size_t i = 0; i < n; ++i) {
      c += prob[i];
      if (u < c) {
        arm = i;
        break;
      }
    }
    const bool success = rng.uniform() < arms[arm];
    const double weight = std::min(1.0 / prob[arm], kMaxImportanceWeight);
    if (success) out.reward += 1.0;
    if (opt.estimator == Exp3Estimator::Gain) {
      if (success) out.estimates[arm] += weight;
    } else {
      for (auto& e : out.estimates) e += 1.0;
      if (!success) out.estimates[arm] -= weight;
    }
    if (opt.record_probabilities) out.probabilities.push_back(prob);
    if (opt.record_trace) {
      out.arms.push_back(arm);
      out.rewards.push_back(success ? 1.0 : 0.0);
    }
  }
  out.regret = *std::max_element(arms.begin(), arms.end()) * static_cast<double>(rounds) - out.reward;
  return out;
}

SwitchResult naive_switch_strategy(double p1, double p2, std::size_t rounds, const RandomSource& src) {
  if (!(p1 >= 0.0 && p1 <= 1.0 && p2 >= 0.0 && p2 <= 1.0)) throw std::invalid_argument("naive_switch_strategy: probabilities must lie in [0, 1]");
  if (p1 == 1.0 && p2 == 1.0) throw std::invalid_argument("naive_switch_strategy: both arms always pay");
  if (rounds < 1) throw std::invalid_argument("naive_switch_strategy: need at least one round");
  SwitchResult r;
  // arm i is left with probability 1 - p_i
  r.stationary_first = (1.0 - p2) / (2.0 - p1 - p2);
  r.closed_form = (p1 + p2 - 2.0 * p1 * p2) / (2.0 - p1 - p2);
  Rng rng = src.stream();
  int arm = 0;
  std::uint64_t wins = 0;
  for (std::size_t t = 0; t < rounds; ++t) {
    if (rng.uniform() < (arm == 0 ? p1 : p2))
      ++wins;
    else
      arm = 1 - arm;
  }
  r.empirical = static_cast<double>(wins) / static_cast<double>(rounds);
  return r;
}

}  // namespace stochlab::decision
