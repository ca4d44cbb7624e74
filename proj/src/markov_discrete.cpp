#include "stochlab/markov_discrete.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

namespace stochlab::markov {
namespace {

using Index = Eigen::Index;

Index idx(std::size_t i) { return static_cast<Index>(i); }

double row_sum_check(double sum, std::size_t row) {
  if (!std::isfinite(sum) || std::fabs(sum - 1.0) > kRenormalizeTolerance) {
    throw std::invalid_argument("row " + std::to_string(row) + " sums to " + std::to_string(sum) +
                                ", not a stochastic row");
  }
  return sum;
}

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

// ---------------------------------------------------------------- types

StochasticMatrix::StochasticMatrix(Matrix p) : p_(std::move(p)) {
  if (p_.rows() != p_.cols() || p_.rows() == 0) throw std::invalid_argument("transition matrix must be square and nonempty");
  for (Index i = 0; i < p_.rows(); ++i) {
    double sum = 0.0;
    for (Index j = 0; j < p_.cols(); ++j) {
      const double v = p_(i, j);
      if (!std::isfinite(v) || v < 0.0) throw std::invalid_argument("transition probabilities must be finite and nonnegative");
      sum += v;
    }
    row_sum_check(sum, static_cast<std::size_t>(i));
    if (sum != 1.0) p_.row(i) /= sum;
  }
}

StochasticMatrix StochasticMatrix::identity(std::size_t n) { return StochasticMatrix(Matrix::Identity(idx(n), idx(n))); }

std::vector<std::vector<std::size_t>> StochasticMatrix::adjacency() const {
  std::vector<std::vector<std::size_t>> adj(size());
  for (Index i = 0; i < p_.rows(); ++i)
    for (Index j = 0; j < p_.cols(); ++j)
      if (p_(i, j) > 0.0) adj[static_cast<std::size_t>(i)].push_back(static_cast<std::size_t>(j));
  return adj;
}

DistributionVector::DistributionVector(Vector v) : v_(std::move(v)) {
  if (v_.size() == 0) throw std::invalid_argument("distribution must be nonempty");
  double sum = 0.0;
  for (Index i = 0; i < v_.size(); ++i) {
    if (!std::isfinite(v_(i))) throw std::invalid_argument("distribution entries must be finite");
    if (v_(i) < 0.0) {
      if (v_(i) < -kRenormalizeTolerance) throw std::invalid_argument("distribution entries must be nonnegative");
      v_(i) = 0.0;
    }
    sum += v_(i);
  }
  if (std::fabs(sum - 1.0) > kRenormalizeTolerance) throw std::invalid_argument("distribution must sum to 1");
  if (sum != 1.0) v_ /= sum;
}

DistributionVector DistributionVector::uniform(std::size_t n) {
  return DistributionVector(Vector::Constant(idx(n), 1.0 / static_cast<double>(n)));
}

DistributionVector DistributionVector::point_mass(std::size_t n, std::size_t state) {
  if (state >= n) throw std::invalid_argument("point mass outside the state space");
  Vector v = Vector::Zero(idx(n));
  v(idx(state)) = 1.0;
  return DistributionVector(std::move(v));
}

SparseStochasticMatrix::SparseStochasticMatrix(std::vector<std::vector<Entry>> rows) : rows_(std::move(rows)) {
  if (rows_.empty()) throw std::invalid_argument("transition matrix must be nonempty");
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    double sum = 0.0;
    for (const auto& e : rows_[i]) {
      if (e.col >= rows_.size()) throw std::invalid_argument("transition target out of range");
      if (!std::isfinite(e.prob) || e.prob < 0.0) throw std::invalid_argument("transition probabilities must be finite and nonnegative");
      sum += e.prob;
    }
    row_sum_check(sum, i);
    if (sum != 1.0)
      for (auto& e : rows_[i]) e.prob /= sum;
  }
}

std::vector<std::vector<std::size_t>> SparseStochasticMatrix::adjacency() const {
  std::vector<std::vector<std::size_t>> adj(size());
  for (std::size_t i = 0; i < rows_.size(); ++i)
    for (const auto& e : rows_[i])
      if (e.prob > 0.0) adj[i].push_back(e.col);
  return adj;
}

std::vector<std::size_t> ChainClassification::closed_classes() const {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < classes.size(); ++k)
    if (closed[k]) out.push_back(k);
  return out;
}

DistributionVector StationaryResult::mixture(const std::vector<double>& alpha) const {
  if (alpha.size() != per_class.size()) throw std::invalid_argument("mixture weights do not match class count");
  Vector v = Vector::Zero(idx(per_class.front().size()));
  for (std::size_t k = 0; k < alpha.size(); ++k) v += alpha[k] * per_class[k].values();
  return DistributionVector(std::move(v));
}

// ---------------------------------------------------------------- evolve

DistributionVector evolve(const StochasticMatrix& p, const DistributionVector& p0, std::size_t steps) {
  if (p.size() != p0.size()) throw std::invalid_argument("evolve: dimension mismatch");
  Vector v = p0.values();
  const Matrix pt = p.matrix().transpose();
  for (std::size_t k = 0; k < steps; ++k) {
    v = pt * v;
    v /= v.sum();
  }
  return DistributionVector(std::move(v));
}

DistributionVector evolve(const SparseStochasticMatrix& p, const DistributionVector& p0, std::size_t steps) {
  if (p.size() != p0.size()) throw std::invalid_argument("evolve: dimension mismatch");
  Vector v = p0.values();
  Vector next(v.size());
  for (std::size_t k = 0; k < steps; ++k) {
    next.setZero();
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double mass = v(idx(i));
      if (mass == 0.0) continue;
      for (const auto& e : p.row(i)) next(idx(e.col)) += mass * e.prob;
    }
    v.swap(next);
    v /= v.sum();
  }
  return DistributionVector(std::move(v));
}

// ---------------------------------------------------------------- classify

ChainClassification classify_graph(const std::vector<std::vector<std::size_t>>& succ) {
  const std::size_t n = succ.size();
  constexpr std::size_t kUnset = std::numeric_limits<std::size_t>::max();

  // iterative Tarjan
  std::vector<std::size_t> index(n, kUnset), low(n, 0), comp(n, kUnset);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::vector<std::pair<std::size_t, std::size_t>> call;  // (node, next edge position)
  std::size_t counter = 0, n_comp = 0;

  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != kUnset) continue;
    call.emplace_back(root, 0);
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      auto& [v, pos] = call.back();
      if (pos < succ[v].size()) {
        const std::size_t w = succ[v][pos++];
        if (index[w] == kUnset) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          call.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp[w] = n_comp;
        } while (w != v);
        ++n_comp;
      }
      const std::size_t finished = v;
      call.pop_back();
      if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[finished]);
    }
  }

  // relabel classes in order of their smallest state
  std::vector<std::size_t> relabel(n_comp, kUnset);
  std::size_t next_label = 0;
  for (std::size_t s = 0; s < n; ++s)
    if (relabel[comp[s]] == kUnset) relabel[comp[s]] = next_label++;

  ChainClassification out;
  out.classes.resize(n_comp);
  out.class_of.resize(n);
  for (std::size_t s = 0; s < n; ++s) {
    out.class_of[s] = relabel[comp[s]];
    out.classes[out.class_of[s]].push_back(s);
  }
  out.closed.assign(n_comp, true);
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t t : succ[s])
      if (out.class_of[t] != out.class_of[s]) out.closed[out.class_of[s]] = false;
  out.essential.resize(n);
  for (std::size_t s = 0; s < n; ++s) out.essential[s] = out.closed[out.class_of[s]];

  // period: gcd of level differences along intra-class edges
  out.period.assign(n_comp, 0);
  std::vector<std::size_t> level(n, kUnset);
  for (std::size_t k = 0; k < n_comp; ++k) {
    const auto& members = out.classes[k];
    std::queue<std::size_t> q;
    level[members.front()] = 0;
    q.push(members.front());
    std::size_t g = 0;
    while (!q.empty()) {
      const std::size_t u = q.front();
      q.pop();
      for (std::size_t v : succ[u]) {
        if (out.class_of[v] != k) continue;
        if (level[v] == kUnset) {
          level[v] = level[u] + 1;
          q.push(v);
        }
        const auto diff = static_cast<long long>(level[u]) + 1 - static_cast<long long>(level[v]);
        g = std::gcd(g, static_cast<std::size_t>(std::llabs(diff)));
      }
    }
    out.period[k] = g;
  }
  return out;
}

ChainClassification classify(const StochasticMatrix& p) { return classify_graph(p.adjacency()); }

ChainClassification classify(const SparseStochasticMatrix& p) { return classify_graph(p.adjacency()); }

// ---------------------------------------------------------------- stationary

namespace {

Vector stationary_on_class(const Matrix& p, const std::vector<std::size_t>& members) {
  const Index m = idx(members.size());
  Matrix a(m, m);
  for (Index r = 0; r < m; ++r)
    for (Index c = 0; c < m; ++c) a(r, c) = p(idx(members[static_cast<std::size_t>(c)]), idx(members[static_cast<std::size_t>(r)]));
  a -= Matrix::Identity(m, m);
  a.row(m - 1).setOnes();
  Vector b = Vector::Zero(m);
  b(m - 1) = 1.0;
  Eigen::FullPivLU<Matrix> lu(a);
  if (!lu.isInvertible()) throw std::runtime_error("stationary: singular balance system on a closed class");
  Vector x = lu.solve(b);
  Vector full = Vector::Zero(p.rows());
  for (Index r = 0; r < m; ++r) {
    double v = x(r);
    if (v < 0.0) {
      if (v < -1e-10) throw std::runtime_error("stationary: negative mass in solution, system is ill-conditioned");
      v = 0.0;
    }
    full(idx(members[static_cast<std::size_t>(r)])) = v;
  }
  full /= full.sum();
  return full;
}

}  // namespace

StationaryResult stationary(const StochasticMatrix& p) {
  const ChainClassification cls = classify(p);
  StationaryResult out;
  for (std::size_t k : cls.closed_classes()) {
    Vector pi = stationary_on_class(p.matrix(), cls.classes[k]);
    const double residual = (p.matrix().transpose() * pi - pi).lpNorm<1>();
    if (residual > 1e-10) {
      throw std::runtime_error("stationary: residual " + std::to_string(residual) + " exceeds tolerance");
    }
    out.class_ids.push_back(k);
    out.per_class.emplace_back(std::move(pi));
  }
  return out;
}

Matrix absorption_probabilities(const StochasticMatrix& p, const ChainClassification& cls) {
  const std::size_t n = p.size();
  const auto closed = cls.closed_classes();
  Matrix result = Matrix::Zero(idx(n), idx(closed.size()));
  std::vector<std::size_t> transient;
  for (std::size_t s = 0; s < n; ++s)
    if (!cls.essential[s]) transient.push_back(s);
  for (std::size_t c = 0; c < closed.size(); ++c)
    for (std::size_t s : cls.classes[closed[c]]) result(idx(s), idx(c)) = 1.0;
  if (transient.empty()) return result;

  const Index t = idx(transient.size());
  Matrix a = Matrix::Identity(t, t);
  Matrix r = Matrix::Zero(t, idx(closed.size()));
  std::vector<std::size_t> closed_pos(cls.classes.size(), 0);
  for (std::size_t c = 0; c < closed.size(); ++c) closed_pos[closed[c]] = c;
  std::vector<Index> tpos(n, -1);
  for (Index i = 0; i < t; ++i) tpos[transient[static_cast<std::size_t>(i)]] = i;
  for (Index i = 0; i < t; ++i) {
    const std::size_t s = transient[static_cast<std::size_t>(i)];
    for (std::size_t j = 0; j < n; ++j) {
      const double pij = p(s, j);
      if (pij == 0.0) continue;
      if (tpos[j] >= 0) {
        a(i, tpos[j]) -= pij;
      } else {
        r(i, idx(closed_pos[cls.class_of[j]])) += pij;
      }
    }
  }
  const Matrix b = a.fullPivLu().solve(r);
  for (Index i = 0; i < t; ++i) result.row(idx(transient[static_cast<std::size_t>(i)])) = b.row(i);
  return result;
}

DistributionVector limiting_distribution(const StochasticMatrix& p, const DistributionVector& p0) {
  if (p.size() != p0.size()) throw std::invalid_argument("limiting_distribution: dimension mismatch");
  const ChainClassification cls = classify(p);
  const auto closed = cls.closed_classes();
  for (std::size_t k : closed) {
    if (cls.period[k] != 1) {
      throw std::domain_error("limiting_distribution: closed class has period " + std::to_string(cls.period[k]) +
                              "; the limit does not exist, use the Cesaro average");
    }
  }
  const StationaryResult st = stationary(p);
  const Matrix absorb = absorption_probabilities(p, cls);
  std::vector<double> alpha(closed.size(), 0.0);
  for (std::size_t c = 0; c < closed.size(); ++c) alpha[c] = p0.values().dot(absorb.col(idx(c)));
  return st.mixture(alpha);
}

DistributionVector cesaro_average(const StochasticMatrix& p, const DistributionVector& p0, std::size_t horizon) {
  if (horizon == 0) throw std::invalid_argument("cesaro_average: horizon must be positive");
  if (p.size() != p0.size()) throw std::invalid_argument("cesaro_average: dimension mismatch");
  const Matrix pt = p.matrix().transpose();
  Vector v = p0.values();
  Vector acc = Vector::Zero(v.size());
  for (std::size_t k = 0; k < horizon; ++k) {
    v = pt * v;
    acc += v;
  }
  return DistributionVector(acc / static_cast<double>(horizon));
}

// ---------------------------------------------------------------- Doeblin

double DoeblinBound::bound(std::size_t n) const { return std::pow(1.0 - delta, static_cast<double>(n / n0)); }

DoeblinBound doeblin_bound(const StochasticMatrix& p) {
  const std::size_t n = p.size();
  const std::size_t cap = n * n;
  Matrix power = p.matrix();
  for (std::size_t n0 = 1; n0 <= cap; ++n0) {
    double best = 0.0;
    std::size_t best_col = 0;
    bool found = false;
    for (Index j = 0; j < power.cols(); ++j) {
      const double m = power.col(j).minCoeff();
      if (m > 0.0 && (!found || m > best)) {
        best = m;
        best_col = static_cast<std::size_t>(j);
        found = true;
      }
    }
    if (found) return {n0, best, best_col};
    power = power * p.matrix();
  }
  throw std::domain_error("doeblin_bound: not strongly ergodic within horizon n0 <= " + std::to_string(cap));
}

// ---------------------------------------------------------------- spectrum

SpectralGap spectral_gap(const StochasticMatrix& p) {
  Eigen::EigenSolver<Matrix> solver(p.matrix(), false);
  if (solver.info() != Eigen::Success) throw std::runtime_error("spectral_gap: eigenvalue solver failed");
  std::vector<std::complex<double>> eig(solver.eigenvalues().begin(), solver.eigenvalues().end());
  std::sort(eig.begin(), eig.end(), [](auto a, auto b) { return std::abs(a) > std::abs(b); });
  // drop the Perron eigenvalue (the one closest to 1)
  auto perron = std::min_element(eig.begin(), eig.end(),
                                 [](auto a, auto b) { return std::abs(a - 1.0) < std::abs(b - 1.0); });
  std::vector<std::complex<double>> rest;
  for (auto it = eig.begin(); it != eig.end(); ++it)
    if (it != perron) rest.push_back(*it);
  double second = 0.0;
  for (auto z : rest) second = std::max(second, std::abs(z));
  second = std::min(second, 1.0);
  const double gap = 1.0 - second;
  return {gap, gap > 1e-10, std::move(eig)};
}

BalanceCheck detailed_balance(const StochasticMatrix& p, const DistributionVector& pi, double tolerance) {
  if (p.size() != pi.size()) throw std::invalid_argument("detailed_balance: dimension mismatch");
  double worst = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j)
      worst = std::max(worst, std::fabs(pi[i] * p(i, j) - pi[j] * p(j, i)));
  return {worst <= tolerance, worst};
}

// ---------------------------------------------------------------- hitting times

HittingTimes hitting_times(const StochasticMatrix& p) {
  const std::size_t n = p.size();
  const ChainClassification cls = classify(p);
  const auto adj = p.adjacency();
  HittingTimes out{Matrix::Constant(idx(n), idx(n), kInf), Vector::Constant(idx(n), kInf)};

  for (std::size_t target = 0; target < n; ++target) {
    // States that can reach a closed class avoiding `target` without it
    // containing `target` never hit it with probability one.
    std::vector<bool> escapes(n, false);
    std::queue<std::size_t> q;
    std::vector<std::vector<std::size_t>> pred(n);
    for (std::size_t s = 0; s < n; ++s)
      if (s != target)
        for (std::size_t t : adj[s])
          if (t != target) pred[t].push_back(s);
    for (std::size_t s = 0; s < n; ++s) {
      if (s != target && cls.essential[s] && cls.class_of[s] != cls.class_of[target]) {
        escapes[s] = true;
        q.push(s);
      }
    }
    while (!q.empty()) {
      const std::size_t v = q.front();
      q.pop();
      for (std::size_t u : pred[v])
        if (!escapes[u]) {
          escapes[u] = true;
          q.push(u);
        }
    }
    std::vector<std::size_t> finite;
    std::vector<Index> pos(n, -1);
    for (std::size_t s = 0; s < n; ++s)
      if (s != target && !escapes[s]) {
        pos[s] = idx(finite.size());
        finite.push_back(s);
      }
    Vector mu_target = Vector::Zero(0);
    if (!finite.empty()) {
      const Index m = idx(finite.size());
      Matrix a = Matrix::Identity(m, m);
      for (Index r = 0; r < m; ++r) {
        const std::size_t s = finite[static_cast<std::size_t>(r)];
        for (std::size_t t = 0; t < n; ++t)
          if (t != target && pos[t] >= 0) a(r, pos[t]) -= p(s, t);
      }
      Eigen::FullPivLU<Matrix> lu(a);
      if (!lu.isInvertible()) throw std::runtime_error("hitting_times: singular first-passage system");
      mu_target = lu.solve(Vector::Ones(m));
      for (Index r = 0; r < m; ++r) out.mean_hitting(idx(finite[static_cast<std::size_t>(r)]), idx(target)) = mu_target(r);
    }
    out.mean_hitting(idx(target), idx(target)) = 0.0;

    double ret = 1.0;
    for (std::size_t t = 0; t < n; ++t) {
      if (t == target || p(target, t) == 0.0) continue;
      if (pos[t] < 0) {
        ret = kInf;
        break;
      }
      ret += p(target, t) * mu_target(pos[t]);
    }
    out.return_times(idx(target)) = ret;
  }
  return out;
}

// ---------------------------------------------------------------- simulation

Occupation simulate_occupation(const StochasticMatrix& p, std::size_t start, std::size_t horizon, Rng& rng) {
  if (start >= p.size()) throw std::invalid_argument("simulate_occupation: start state out of range");
  if (horizon == 0) throw std::invalid_argument("simulate_occupation: horizon must be positive");
  const std::size_t n = p.size();
  std::vector<CategoricalSampler> rows;
  rows.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> w(n);
    for (std::size_t j = 0; j < n; ++j) w[j] = p(i, j);
    rows.emplace_back(w);
  }
  std::vector<std::size_t> visits(n, 0);
  double log2l = 0.0;
  std::size_t state = start;
  for (std::size_t k = 0; k < horizon; ++k) {
    const std::size_t next = rows[state](rng);
    log2l += std::log2(p(state, next));
    state = next;
    ++visits[state];
  }
  Vector freq(idx(n));
  for (std::size_t i = 0; i < n; ++i) freq(idx(i)) = static_cast<double>(visits[i]) / static_cast<double>(horizon);
  return {freq, log2l, horizon};
}

double entropy_rate(const StochasticMatrix& p, const DistributionVector& pi) {
  if (p.size() != pi.size()) throw std::invalid_argument("entropy_rate: dimension mismatch");
  double h = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < p.size(); ++j) {
      const double q = p(i, j);
      if (q > 0.0) row -= q * std::log2(q);
    }
    h += pi[i] * row;
  }
  return h;
}

double gambler_ruin(double p, std::size_t k, std::optional<std::size_t> cap) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("gambler_ruin: p must lie in (0,1)");
  const double q = 1.0 - p;
  if (!cap) {
    if (p <= 0.5) return 1.0;
    return std::pow(q / p, static_cast<double>(k));
  }
  const std::size_t m = *cap;
  if (k > m) throw std::invalid_argument("gambler_ruin: start capital exceeds the cap");
  if (k == 0) return 1.0;
  if (k == m) return 0.0;
  if (p == 0.5) return static_cast<double>(m - k) / static_cast<double>(m);
  const double r = q / p;
  const double rk = std::pow(r, static_cast<double>(k));
  const double rm = std::pow(r, static_cast<double>(m));
  return (rk - rm) / (1.0 - rm);
}

// ---------------------------------------------------------------- builders

StochasticMatrix ehrenfest_discrete(std::size_t n_particles) {
  if (n_particles == 0) throw std::invalid_argument("ehrenfest_discrete: need at least one particle");
  const std::size_t n = n_particles + 1;
  Matrix m = Matrix::Zero(idx(n), idx(n));
  const auto big_n = static_cast<double>(n_particles);
  for (std::size_t i = 0; i < n; ++i) {
    if (i < n_particles) m(idx(i), idx(i + 1)) = 1.0 - static_cast<double>(i) / big_n;
    if (i > 0) m(idx(i), idx(i - 1)) = static_cast<double>(i) / big_n;
  }
  return StochasticMatrix(std::move(m));
}

StochasticMatrix hypercube_walk(std::size_t dimension) {
  if (dimension == 0 || dimension > 12) throw std::invalid_argument("hypercube_walk: dimension must be in [1, 12]");
  const std::size_t n = std::size_t{1} << dimension;
  Matrix m = Matrix::Zero(idx(n), idx(n));
  for (std::size_t v = 0; v < n; ++v)
    for (std::size_t b = 0; b < dimension; ++b) m(idx(v), idx(v ^ (std::size_t{1} << b))) = 1.0 / static_cast<double>(dimension);
  return StochasticMatrix(std::move(m));
}

StochasticMatrix gambler_ruin_chain(double p, std::size_t cap) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("gambler_ruin_chain: p must lie in (0,1)");
  if (cap < 1) throw std::invalid_argument("gambler_ruin_chain: cap must be positive");
  const std::size_t n = cap + 1;
  Matrix m = Matrix::Zero(idx(n), idx(n));
  m(0, 0) = 1.0;
  m(idx(cap), idx(cap)) = 1.0;
  for (std::size_t i = 1; i < cap; ++i) {
    m(idx(i), idx(i + 1)) = p;
    m(idx(i), idx(i - 1)) = 1.0 - p;
  }
  return StochasticMatrix(std::move(m));
}

}  // namespace stochlab::markov
