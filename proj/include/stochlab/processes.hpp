#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "stochlab/rng.hpp"
#include "stochlab/trajectory.hpp"

namespace stochlab::proc {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

struct GaussianVectorSpec {
  Vector mean;
  Matrix cov;

  /// Symmetric within 1e-12 and eigenvalues >= -1e-10, else std::invalid_argument.
  void validate() const;
};

// ---- Poisson family

/// Counting path with unit jumps at partial sums of Exp(rate) draws.
Trajectory sample_poisson_path(double rate, double t_max, Rng& rng);

/// Q(t) = sum of jumps up to K(t). The holding time is drawn before each
/// jump, so a jump sampler that uses no randomness yields the same event
/// times as sample_poisson_path under the same stream.
Trajectory sample_compound_poisson(double rate, const std::function<double(Rng&)>& jump, double t_max, Rng& rng);

/// Keeps each jump of a step path independently with probability p.
Trajectory thin(const Trajectory& path, double p, Rng& rng);

// ---- Wiener family

/// W on the given grid (grid[0] must be 0) with independent N(0, sigma^2 dt) increments.
Trajectory sample_wiener(double sigma, const std::vector<double>& grid, Rng& rng);

/// paths independent Wiener paths on one grid; path p uses src.child(p).
PathEnsemble wiener_ensemble(double sigma, const std::vector<double>& grid, std::size_t paths, const RandomSource& src);

/// X_N(t) = sum_{i <= floor(N t)} of +-sigma/sqrt(N) steps, as a step path.
Trajectory scaled_random_walk(double sigma, std::size_t n, double t_max, Rng& rng);

/// sum (x_{k+1} - x_k)^2 over the stored points.
double quadratic_variation(const Trajectory& path);

/// sum W(tau_k) (W(t_{k+1}) - W(t_k)) with W(tau_k) = (1-theta) W(t_k) + theta W(t_{k+1}).
double theta_integral(const Trajectory& w, double theta);
inline double ito_integral(const Trajectory& w) { return theta_integral(w, 0.0); }

/// S0 exp(a t) exp(sigma W(t) - sigma^2 t / 2), exact on the grid.
Trajectory geometric_brownian(double s0, double a, double sigma, const std::vector<double>& grid, Rng& rng);

// ---- Example functionals

struct McEstimate {
  double estimate;
  double std_error;
  std::size_t samples;
};

/// (e^{lambda a} - 1) / lambda
double pedestrian_closed_form(double lambda, double a);
/// Direct simulation of min(t : K(t-a) = K(t)).
double pedestrian_sample(double lambda, double a, Rng& rng);
McEstimate pedestrian_crossing(double lambda, double a, std::size_t runs, const RandomSource& src);

struct MaxLawPoint {
  double x;
  double analytic;   ///< 2 (1 - Phi(x / sqrt(T)))
  double empirical;  ///< fraction of grid paths with max >= x
};

/// P(max_{[0,T]} W >= x) for unit-variance W. Every path is shared across
/// all x, sampled on a grid with steps_per_unit steps per unit time. Grid
/// maxima sit slightly below the continuous maximum.
std::vector<MaxLawPoint> max_law_check(double t_max, const std::vector<double>& xs, std::size_t paths,
                                       std::size_t steps_per_unit, const RandomSource& src);

// ---- Gaussian vectors

/// E(X_{i1} ... X_{ik}) for zero-mean X with covariance r. Odd k gives 0.
/// Throws std::invalid_argument for k > 20.
double wick_moment(const Matrix& r, const std::vector<std::size_t>& indices);

struct GaussianConditional {
  std::vector<std::size_t> free_indices;
  Vector mean;
  Matrix cov;
};

/// Law of the free coordinates given X_fixed = values. Throws
/// std::domain_error when the conditioning block is singular.
GaussianConditional gaussian_conditional(const GaussianVectorSpec& spec, const std::vector<std::size_t>& fixed,
                                         const std::vector<double>& values);

struct EnsembleMoments {
  Vector mean;
  Matrix correlation;  ///< sample central second moments R(t_i, t_j)
};

/// Throws std::invalid_argument for fewer than two paths.
EnsembleMoments empirical_moments(const PathEnsemble& ensemble);

// ---- Dirichlet problem

struct Rectangle {
  double x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;
};

/// Mean of g at the exit node of simple 4-neighbour walks on the h-lattice
/// of the rectangle. A start point between nodes is handled by drawing the
/// starting node from its bilinear weights.
McEstimate dirichlet_monte_carlo(const std::function<double(double, double)>& g, double x, double y, double h,
                                 std::size_t walks, const RandomSource& src, const Rectangle& box = {});

}  // namespace stochlab::proc
