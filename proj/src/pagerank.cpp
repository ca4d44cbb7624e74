#include "stochlab/pagerank.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

#include <Eigen/Dense>

#include "stochlab/parallel.hpp"

namespace stochlab::pagerank {

WebGraph::WebGraph(std::size_t n, const std::vector<Edge>& edges) : out_(n), in_(n) {
  if (n == 0) throw std::invalid_argument("WebGraph: empty graph");
  std::vector<std::map<std::size_t, double>> rows(n);
  for (const auto& e : edges) {
    if (e.src >= n || e.dst >= n) throw std::invalid_argument("WebGraph: node id out of range");
    if (!(e.weight > 0.0) || !std::isfinite(e.weight)) throw std::invalid_argument("WebGraph: weights must be positive");
    rows[e.src][e.dst] += e.weight;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].empty()) {
      ++patched_;
      out_[i].reserve(n);
      for (std::size_t j = 0; j < n; ++j) out_[i].push_back({j, 1.0 / static_cast<double>(n)});
      continue;
    }
    double total = 0.0;
    for (const auto& [j, w] : rows[i]) total += w;
    for (const auto& [j, w] : rows[i]) out_[i].push_back({j, w / total});
  }
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& l : out_[i]) in_[l.node].push_back({i, l.prob});
}

std::size_t WebGraph::link_count() const noexcept {
  std::size_t c = 0;
  for (const auto& r : out_) c += r.size();
  return c;
}

void WebGraph::validate() const {
  for (std::size_t i = 0; i < out_.size(); ++i) {
    if (out_[i].empty()) throw std::invalid_argument("WebGraph: dangling node " + std::to_string(i));
    double s = 0.0;
    for (const auto& l : out_[i]) s += l.prob;
    if (std::fabs(s - 1.0) > 1e-12) throw std::invalid_argument("WebGraph: row " + std::to_string(i) + " is not stochastic");
  }
}

std::vector<double> WebGraph::teleport_step(const std::vector<double>& p, double delta) const {
  const std::size_t n = size();
  if (p.size() != n) throw std::invalid_argument("teleport_step: size mismatch");
  const double mass = std::accumulate(p.begin(), p.end(), 0.0);
  const double jump = delta * mass / static_cast<double>(n);
  std::vector<double> q(n);
  parallel_for(n, [&](std::size_t j) {
    double acc = 0.0;
    for (const auto& l : in_[j]) acc += p[l.node] * l.prob;
    q[j] = (1.0 - delta) * acc + jump;
  });
  return q;
}

double l1_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::fabs(a[i] - b[i]);
  return s;
}

double l2_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

double residual(const WebGraph& g, const std::vector<double>& nu, double delta) {
  return l1_distance(g.teleport_step(nu, delta), nu);
}

namespace {

void check_delta(double delta) {
  if (!(delta >= 0.0 && delta <= 1.0)) throw std::invalid_argument("teleportation must lie in [0, 1]");
}

}  // namespace

PageRankResult power_iteration(const WebGraph& g, double delta, double eps, std::size_t max_iter) {
  check_delta(delta);
  if (!(eps > 0.0)) throw std::invalid_argument("power_iteration: eps must be positive");
  const std::size_t n = g.size();
  std::vector<double> p(n, 1.0 / static_cast<double>(n));
  for (std::size_t it = 1; it <= max_iter; ++it) {
    auto q = g.teleport_step(p, delta);
    const double diff = l1_distance(q, p);
    p = std::move(q);
    if (diff <= eps) return {p, "power", it, residual(g, p, delta)};
  }
  throw std::runtime_error("power_iteration: no convergence within " + std::to_string(max_iter) + " iterations");
}

PageRankResult cesaro_pagerank(const WebGraph& g, std::size_t horizon, const std::vector<double>& start, double delta) {
  check_delta(delta);
  if (horizon < 1) throw std::invalid_argument("cesaro_pagerank: T must be >= 1");
  const std::size_t n = g.size();
  std::vector<double> p = start.empty() ? std::vector<double>(n, 1.0 / static_cast<double>(n)) : start;
  if (p.size() != n) throw std::invalid_argument("cesaro_pagerank: start has wrong size");
  std::vector<double> acc(n, 0.0);
  for (std::size_t t = 0; t < horizon; ++t) {
    for (std::size_t i = 0; i < n; ++i) acc[i] += p[i];
    if (t + 1 < horizon) p = g.teleport_step(p, delta);
  }
  for (double& v : acc) v /= static_cast<double>(horizon);
  return {acc, "cesaro", horizon, residual(g, acc, delta)};
}

std::size_t default_walk_length(std::size_t n, double delta, double epsilon) {
  if (!(delta > 0.0)) throw std::invalid_argument("default walk length needs delta > 0");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("epsilon must lie in (0, 1)");
  return static_cast<std::size_t>(std::max(1.0, std::ceil(std::log(static_cast<double>(n) / epsilon) / delta)));
}

double mcmc_error_bound(std::size_t walkers, double sigma) {
  if (walkers == 0) throw std::invalid_argument("need at least one walker");
  if (!(sigma > 0.0 && sigma < 1.0)) throw std::invalid_argument("sigma must lie in (0, 1)");
  return 4.0 * std::sqrt(std::log(1.0 / sigma) / static_cast<double>(walkers));
}

McmcResult mcmc_pagerank(const WebGraph& g, double delta, const McmcOptions& opt, const RandomSource& src) {
  check_delta(delta);
  if (opt.walkers < 1) throw std::invalid_argument("mcmc_pagerank: need at least one walker");
  const std::size_t n = g.size();
  const std::size_t steps = opt.steps ? opt.steps : default_walk_length(n, delta, opt.epsilon);

  std::vector<CategoricalSampler> next(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> w;
    w.reserve(g.out(i).size());
    for (const auto& l : g.out(i)) w.push_back(l.prob);
    next[i] = CategoricalSampler(w);
  }

  std::vector<std::size_t> end(opt.walkers);
  parallel_for(opt.walkers, [&](std::size_t k) {
    Rng rng = src.child(k).stream();
    std::size_t x = rng.below(n);
    for (std::size_t s = 0; s < steps; ++s) {
      if (rng.uniform() < delta)
        x = rng.below(n);
      else
        x = g.out(x)[next[x](rng)].node;
    }
    end[k] = x;
  });

  std::vector<std::uint64_t> counts(n, 0);
  for (std::size_t x : end) ++counts[x];
  std::vector<double> nu(n);
  for (std::size_t i = 0; i < n; ++i) nu[i] = static_cast<double>(counts[i]) / static_cast<double>(opt.walkers);

  McmcResult out;
  out.estimate = {nu, "mcmc", opt.walkers, residual(g, nu, delta)};
  out.steps = steps;
  out.bound = mcmc_error_bound(opt.walkers, opt.sigma);
  return out;
}

std::uint64_t bernoulli_poll_size(double eps, double sigma) {
  if (!(eps > 0.0 && eps < 1.0) || !(sigma > 0.0 && sigma < 1.0))
    throw std::invalid_argument("bernoulli_poll_size: eps and sigma must lie in (0, 1)");
  const double need = std::log(2.0 / sigma) / (4.0 * eps * eps);
  auto n = static_cast<std::uint64_t>(std::ceil(need));
  // guard against ceil landing one above an exact integer
  if (n > 1 && 0.5 * std::sqrt(std::log(2.0 / sigma) / static_cast<double>(n - 1)) <= eps) --n;
  return std::max<std::uint64_t>(n, 1);
}

WebGraph aggregate_sites(const std::vector<std::size_t>& target, std::size_t m) {
  if (m < 1) throw std::invalid_argument("aggregate_sites: m must be >= 1");
  const std::size_t n = target.size();
  const std::size_t sites = (n + m - 1) / m;
  std::vector<Edge> edges;
  edges.reserve(n);
  for (std::size_t t = 0; t < n; ++t) edges.push_back({t / m, target[t] / m, 1.0});
  return WebGraph(sites, edges);
}

GrowthModel buckley_osthus_generate(std::size_t n, double a, std::size_t m, const RandomSource& src) {
  if (n < 1) throw std::invalid_argument("buckley_osthus_generate: n must be >= 1");
  if (!(a > 0.0)) throw std::invalid_argument("buckley_osthus_generate: a must be positive");
  if (m < 1) throw std::invalid_argument("buckley_osthus_generate: m must be >= 1");
  GrowthModel g;
  g.target.resize(n);
  g.indegree.assign(n, 0);
  g.target[0] = 0;
  g.indegree[0] = 1;
  Rng rng = src.stream();
  // uniform page with probability a/(1+a), otherwise the target of a uniform
  // link, which picks page i with probability indeg(i)/t
  const double uniform_share = a / (1.0 + a);
  for (std::size_t t = 1; t < n; ++t) {
    const std::size_t pick = rng.below(t);
    const std::size_t i = rng.uniform() < uniform_share ? pick : g.target[pick];
    g.target[t] = i;
    ++g.indegree[i];
  }
  g.sites = aggregate_sites(g.target, m);
  return g;
}

std::vector<double> mean_field_degree_law(double a, std::size_t kmax) {
  if (!(a > 0.0)) throw std::invalid_argument("mean_field_degree_law: a must be positive");
  std::vector<double> c(kmax + 1);
  c[0] = (1.0 + a) / (1.0 + 2.0 * a);
  for (std::size_t k = 1; k <= kmax; ++k) {
    const double kd = static_cast<double>(k);
    c[k] = c[k - 1] * (kd - 1.0 + a) / (kd + 1.0 + 2.0 * a);
  }
  return c;
}

std::vector<double> degree_histogram(const std::vector<std::size_t>& degrees) {
  std::size_t top = 0;
  for (auto d : degrees) top = std::max(top, d);
  std::vector<double> h(top + 1, 0.0);
  for (auto d : degrees) h[d] += 1.0;
  return h;
}

namespace {

// slope of y on x by least squares
double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixXd d(n, 2);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    d(i, 0) = 1.0;
    d(i, 1) = x[static_cast<std::size_t>(i)];
    v(i) = y[static_cast<std::size_t>(i)];
  }
  return d.colPivHouseholderQr().solve(v)(1);
}

}  // namespace

PowerLawFit powerlaw_fit(const std::vector<double>& hist) {
  std::size_t occupied = 0, kmax = 0;
  for (std::size_t k = 1; k < hist.size(); ++k) {
    if (hist[k] < 0.0) throw std::invalid_argument("powerlaw_fit: negative count");
    if (hist[k] > 0.0) {
      ++occupied;
      kmax = k;
    }
  }
  if (occupied < 10) throw std::domain_error("powerlaw_fit: fewer than 10 occupied degrees");
  const double hi_k = static_cast<double>(kmax) / 4.0;
  std::vector<double> lx, ly;
  for (int j = 0;; ++j) {
    const double lo = 5.0 * std::exp2(j / 4.0), hi = 5.0 * std::exp2((j + 1) / 4.0);
    if (lo > hi_k) break;
    const auto k1 = static_cast<std::size_t>(std::ceil(lo));
    const auto k2 = std::min(static_cast<std::size_t>(std::ceil(hi)) - 1, static_cast<std::size_t>(std::floor(hi_k)));
    if (k2 < k1) continue;
    double count = 0.0;
    for (std::size_t k = k1; k <= k2; ++k) count += hist[k];
    if (count <= 0.0) continue;
    lx.push_back(0.5 * std::log(lo * hi));
    ly.push_back(std::log(count / static_cast<double>(k2 - k1 + 1)));
  }
  if (lx.size() < 3) throw std::domain_error("powerlaw_fit: fewer than 3 usable bins in [5, kmax/4]");
  return {-ls_slope(lx, ly), lx.size()};
}

PowerLawFit rank_law_fit(std::vector<std::size_t> degrees) {
  std::sort(degrees.begin(), degrees.end(), std::greater<>());
  std::size_t top = 0;
  while (top < degrees.size() && degrees[top] >= 5) ++top;
  std::vector<double> lx, ly;
  std::size_t last = 0;
  for (int j = 0;; ++j) {
    const auto r = static_cast<std::size_t>(std::llround(10.0 * std::exp2(j / 4.0)));
    if (r > top) break;
    if (r == last) continue;
    last = r;
    lx.push_back(std::log(static_cast<double>(r)));
    ly.push_back(std::log(static_cast<double>(degrees[r - 1])));
  }
  if (lx.size() < 3) throw std::domain_error("rank_law_fit: too few ranks with degree >= 5");
  return {-ls_slope(lx, ly), lx.size()};
}

}  // namespace stochlab::pagerank
