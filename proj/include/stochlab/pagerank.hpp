#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "stochlab/rng.hpp"

namespace stochlab::pagerank {

struct Edge {
  std::size_t src;
  std::size_t dst;
  double weight = 1.0;
};

/// Row-stochastic link graph. Rows are normalized on construction and nodes
/// without out-links get a uniform row.
class WebGraph {
 public:
  struct Link {
    std::size_t node;
    double prob;
  };

  WebGraph() = default;
  /// Throws std::invalid_argument for ids >= n or non-positive weights.
  WebGraph(std::size_t n, const std::vector<Edge>& edges);

  std::size_t size() const noexcept { return out_.size(); }
  const std::vector<Link>& out(std::size_t i) const { return out_[i]; }
  const std::vector<Link>& in(std::size_t j) const { return in_[j]; }
  std::size_t patched_dangling() const noexcept { return patched_; }
  std::size_t link_count() const noexcept;

  /// Throws std::invalid_argument unless every row sums to 1 within 1e-12.
  void validate() const;

  /// (1 - delta) P^T p + delta * sum(p) / n.
  std::vector<double> teleport_step(const std::vector<double>& p, double delta) const;

 private:
  std::vector<std::vector<Link>> out_;
  std::vector<std::vector<Link>> in_;
  std::size_t patched_ = 0;
};

struct PageRankResult {
  std::vector<double> nu;
  std::string method;
  std::size_t iterations = 0;  ///< iterations, averaging horizon or walkers
  double residual = 0.0;       ///< || (teleported P)^T nu - nu ||_1
};

double l1_distance(const std::vector<double>& a, const std::vector<double>& b);
double l2_distance(const std::vector<double>& a, const std::vector<double>& b);

/// ||(teleported P)^T nu - nu||_1
double residual(const WebGraph& g, const std::vector<double>& nu, double delta);

inline constexpr double kDefaultTeleport = 0.15;

/// Iterates p <- (1-delta) P^T p + delta/n from the uniform vector until
/// successive iterates differ by at most eps in l1. Throws std::runtime_error
/// after max_iter iterations.
PageRankResult power_iteration(const WebGraph& g, double delta = kDefaultTeleport, double eps = 1e-12,
                               std::size_t max_iter = 100000);

/// Mean of p(0), ..., p(T-1) for p(t+1) = P^T p(t) (teleported when delta > 0).
/// An empty start means uniform.
PageRankResult cesaro_pagerank(const WebGraph& g, std::size_t horizon, const std::vector<double>& start = {},
                               double delta = 0.0);

struct McmcOptions {
  std::size_t walkers = 100000;
  std::size_t steps = 0;  ///< 0 picks ceil(ln(n/epsilon)/delta)
  double epsilon = 1e-3;
  double sigma = 0.01;
};

struct McmcResult {
  PageRankResult estimate;
  std::size_t steps = 0;
  double bound = 0.0;  ///< 4 sqrt(ln(1/sigma)/N)
};

/// Independent walkers from uniform starts; each step teleports with
/// probability delta, otherwise follows an out-link. nu is the endpoint histogram.
McmcResult mcmc_pagerank(const WebGraph& g, double delta, const McmcOptions& opt, const RandomSource& src);

std::size_t default_walk_length(std::size_t n, double delta, double epsilon);
double mcmc_error_bound(std::size_t walkers, double sigma);

/// Smallest N with (1/2) sqrt(ln(2/sigma)/N) <= eps.
std::uint64_t bernoulli_poll_size(double eps, double sigma);

struct GrowthModel {
  std::vector<std::size_t> target;     ///< page t links to target[t]; page 0 links to itself
  std::vector<std::size_t> indegree;   ///< per page, sums to n
  WebGraph sites;                      ///< pages grouped m at a time
};

/// Preferential attachment: page t links to an older page i with probability
/// (indeg(i) + a) / (t (1 + a)).
GrowthModel buckley_osthus_generate(std::size_t n, double a, std::size_t m, const RandomSource& src);

/// Groups consecutive pages m at a time; multi-links become weights l/m.
WebGraph aggregate_sites(const std::vector<std::size_t>& target, std::size_t m);

/// Stationary fractions c_k of pages with in-degree k, k = 0..kmax.
std::vector<double> mean_field_degree_law(double a, std::size_t kmax);

struct PowerLawFit {
  double exponent;
  std::size_t bins;  ///< log bins used in the regression
};

/// Exponent of c_k ~ k^-gamma from a histogram (hist[k] = count of degree k):
/// least squares on log-binned densities over k in [5, kmax/4]. Throws
/// std::domain_error with fewer than 10 occupied degrees or 3 usable bins.
PowerLawFit powerlaw_fit(const std::vector<double>& hist);

/// Exponent of deg(r) ~ r^-zeta for degrees sorted by rank, fitted over
/// log-spaced ranks whose degree is at least 5.
PowerLawFit rank_law_fit(std::vector<std::size_t> degrees);

std::vector<double> degree_histogram(const std::vector<std::size_t>& degrees);

}  // namespace stochlab::pagerank
