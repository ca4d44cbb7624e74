#pragma once

#include <complex>
#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "stochlab/rng.hpp"

namespace stochlab::markov {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr double kRowSumTolerance = 1e-12;
/// Rows closer than this to stochastic are renormalized on construction.
inline constexpr double kRenormalizeTolerance = 1e-9;
/// Dense paths are used up to this many states.
inline constexpr std::size_t kDenseLimit = 4096;

/// Row-stochastic transition matrix of a finite homogeneous chain.
class StochasticMatrix {
 public:
  /// Throws std::invalid_argument for non-square input, negative entries or
  /// rows whose sum is off by more than kRenormalizeTolerance.
  explicit StochasticMatrix(Matrix p);

  static StochasticMatrix identity(std::size_t n);

  std::size_t size() const noexcept { return static_cast<std::size_t>(p_.rows()); }
  double operator()(std::size_t i, std::size_t j) const {
    return p_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  const Matrix& matrix() const noexcept { return p_; }

  /// Successor lists of the transition graph (entries > 0).
  std::vector<std::vector<std::size_t>> adjacency() const;

 private:
  Matrix p_;
};

/// Probability vector over states.
class DistributionVector {
 public:
  explicit DistributionVector(Vector v);

  static DistributionVector uniform(std::size_t n);
  static DistributionVector point_mass(std::size_t n, std::size_t state);

  std::size_t size() const noexcept { return static_cast<std::size_t>(v_.size()); }
  double operator[](std::size_t i) const { return v_(static_cast<Eigen::Index>(i)); }
  const Vector& values() const noexcept { return v_; }

 private:
  Vector v_;
};

/// Sparse row storage for chains above kDenseLimit states.
class SparseStochasticMatrix {
 public:
  struct Entry {
    std::size_t col;
    double prob;
  };

  /// rows[i] lists the outgoing transitions of state i. Same validation and
  /// renormalization policy as StochasticMatrix.
  explicit SparseStochasticMatrix(std::vector<std::vector<Entry>> rows);

  std::size_t size() const noexcept { return rows_.size(); }
  const std::vector<Entry>& row(std::size_t i) const { return rows_[i]; }
  std::vector<std::vector<std::size_t>> adjacency() const;

 private:
  std::vector<std::vector<Entry>> rows_;
};

struct ChainClassification {
  std::vector<std::vector<std::size_t>> classes;  ///< communicating classes, each sorted
  std::vector<std::size_t> class_of;              ///< class index of every state
  std::vector<bool> closed;                       ///< per class
  std::vector<bool> essential;                    ///< per state
  std::vector<std::size_t> period;                ///< per class; 0 for a class with no internal cycle

  std::vector<std::size_t> closed_classes() const;
  bool irreducible() const noexcept { return classes.size() == 1; }
};

/// One stationary vector per closed class. The stationary set of the chain
/// is the convex hull of these vectors.
struct StationaryResult {
  std::vector<std::size_t> class_ids;           ///< index into ChainClassification::classes
  std::vector<DistributionVector> per_class;    ///< supported on the corresponding class

  /// sum_k alpha_k pi^(k); alpha must be a probability vector of matching length.
  DistributionVector mixture(const std::vector<double>& alpha) const;
};

DistributionVector evolve(const StochasticMatrix& p, const DistributionVector& p0, std::size_t steps);
DistributionVector evolve(const SparseStochasticMatrix& p, const DistributionVector& p0, std::size_t steps);

/// Communicating classes from Tarjan's SCC algorithm; period of each class is
/// the gcd of level(u) + 1 - level(v) over intra-class edges of a BFS tree.
ChainClassification classify(const StochasticMatrix& p);
ChainClassification classify(const SparseStochasticMatrix& p);
ChainClassification classify_graph(const std::vector<std::vector<std::size_t>>& successors);

StationaryResult stationary(const StochasticMatrix& p);

/// Limit of evolve(P, p0, n) for chains whose closed classes are aperiodic.
/// Throws std::domain_error when a closed class is periodic; use
/// cesaro_average in that case.
DistributionVector limiting_distribution(const StochasticMatrix& p, const DistributionVector& p0);

/// (1/N) sum_{k=1..N} evolve(P, p0, k).
DistributionVector cesaro_average(const StochasticMatrix& p, const DistributionVector& p0, std::size_t horizon);

/// Absorption probabilities: entry (i, k) is the probability of ending in
/// closed class k (order of closed_classes()) from state i.
Matrix absorption_probabilities(const StochasticMatrix& p, const ChainClassification& cls);

struct DoeblinBound {
  std::size_t n0;
  double delta;
  std::size_t column;  ///< the state j0 whose column is bounded below by delta

  /// (1 - delta)^floor(n / n0)
  double bound(std::size_t n) const;
};

/// Smallest n0 <= size^2 for which P^n0 has a strictly positive column; among
/// such columns the one with the largest minimum wins. Throws
/// std::domain_error when no such n0 exists within the cap.
DoeblinBound doeblin_bound(const StochasticMatrix& p);

struct SpectralGap {
  double gap;       ///< 1 - max |lambda| after removing the Perron eigenvalue
  bool ergodic;     ///< false when another eigenvalue sits on the unit circle
  std::vector<std::complex<double>> eigenvalues;
};

SpectralGap spectral_gap(const StochasticMatrix& p);

struct BalanceCheck {
  bool reversible;
  double max_violation;
};

BalanceCheck detailed_balance(const StochasticMatrix& p, const DistributionVector& pi,
                              double tolerance = 1e-10);

struct HittingTimes {
  Matrix mean_hitting;   ///< (i, j): mean steps to reach j from i (i != j); +inf when not a.s. finite
  Vector return_times;   ///< mean first return time to each state; +inf when not a.s. finite
};

HittingTimes hitting_times(const StochasticMatrix& p);

struct Occupation {
  Vector frequencies;     ///< V_i(n) / n over the visited states xi_1..xi_n
  double log2_likelihood; ///< sum of log2 p along the path
  std::size_t steps;

  double empirical_entropy_rate() const { return -log2_likelihood / static_cast<double>(steps); }
};

Occupation simulate_occupation(const StochasticMatrix& p, std::size_t start, std::size_t horizon, Rng& rng);

/// -sum_i pi_i sum_j p_ij log2 p_ij with 0 log 0 = 0.
double entropy_rate(const StochasticMatrix& p, const DistributionVector& pi);

/// Ruin probability from capital k with win probability p; an empty cap
/// means an unbounded opponent.
double gambler_ruin(double p, std::size_t k, std::optional<std::size_t> cap);

// Model builders used across the project.
StochasticMatrix ehrenfest_discrete(std::size_t n_particles);
StochasticMatrix hypercube_walk(std::size_t dimension);
StochasticMatrix gambler_ruin_chain(double p, std::size_t cap);

}  // namespace stochlab::markov
