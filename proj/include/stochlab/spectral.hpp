#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "stochlab/trajectory.hpp"

namespace stochlab::spectral {

/// Continuous time uses the full line: rho(nu) = (1/2pi) int e^{-i nu t} R(t) dt.
/// Discrete time uses [-pi, pi]: R(n) = int e^{i n nu} rho(nu) d nu.
enum class TimeDomain { Continuous, Discrete };

struct CorrelationFunction {
  std::function<double(double)> r;  ///< even in tau
  TimeDomain domain = TimeDomain::Continuous;
  std::string tag;

  double operator()(double tau) const { return r(tau); }
  double variance() const { return r(0.0); }

  /// D e^{-a |tau|}
  static CorrelationFunction exponential(double d, double a);
  /// sigma^2 sin(nu0 t) / (pi t), the transform of a flat band |nu| <= nu0
  static CorrelationFunction band_limited(double sigma2, double nu0);
  /// Discrete white noise: sigma^2 at lag 0, zero elsewhere.
  static CorrelationFunction white_noise(double sigma2);
  static CorrelationFunction constant(double c);
  static CorrelationFunction cosine(double amplitude, double frequency);
  /// Piecewise-linear through (tau_k, R_k) for tau_k >= 0, zero beyond the last lag.
  static CorrelationFunction sampled(std::vector<double> taus, std::vector<double> values);
};

struct SpectralDensity {
  std::function<double(double)> rho;  ///< even in nu
  double support = std::numeric_limits<double>::infinity();  ///< rho vanishes for |nu| > support
  TimeDomain domain = TimeDomain::Continuous;
  std::string tag;

  double operator()(double nu) const { return std::fabs(nu) > support ? 0.0 : rho(nu); }

  /// D a / (pi (a^2 + nu^2)), the pair of D e^{-a|tau|}
  static SpectralDensity lorentzian(double d, double a);
  /// sigma^2 / (2 pi) on |nu| <= nu0
  static SpectralDensity band(double sigma2, double nu0);
  /// value c on the discrete band [-pi, pi]
  static SpectralDensity flat_discrete(double c);
};

struct QuadratureSpec {
  double abs_tol = 1e-12;
  /// Window ends once |f| < truncation * max|f| on the first panel.
  double truncation = 1e-10;
  /// Natural time (or frequency) unit of the integrand; panel length.
  double scale = 1.0;
  std::size_t max_panels = 200000;
};

/// int_0^upper f(t) cos(omega t) dt, upper may be infinite. Throws
/// std::domain_error when |f| does not decay fast enough to be absolutely
/// integrable, std::runtime_error when the sum does not settle.
double cosine_integral(const std::function<double(double)>& f, double omega, double upper,
                       const QuadratureSpec& q = {});

/// Adaptive Simpson on [a, b].
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol);

SpectralDensity correlation_to_density(const CorrelationFunction& r, const QuadratureSpec& q = {});
CorrelationFunction density_to_correlation(const SpectralDensity& rho, const QuadratureSpec& q = {});

struct DefinitenessCheck {
  bool nonnegative;
  double min_eigenvalue;
};

/// Smallest eigenvalue of [R(t_i - t_j)] on at most 512 points; passes when
/// it is >= -1e-8 R(0).
DefinitenessCheck check_nonneg_definite(const std::function<double(double)>& r, const std::vector<double>& times);

/// Time average (1/T) int_0^T x(t) dt of a grid path (trapezoid rule).
double ergodic_mean(const Trajectory& path, double t_max);

/// (2/T) int_0^T (1 - tau/T) R(tau) d tau for a stationary correlation.
double ergodicity_criterion(const std::function<double(double)>& r, double t_max, double tol = 1e-12);

/// (T - t0)^{-2} int int_{[t0,T]^2} R(t1, t2) for a general correlation.
double ergodicity_criterion(const std::function<double(double, double)>& r, double t0, double t_max,
                            double tol = 1e-11);

/// rho_in(nu) / |sum_k a_k (i nu)^k|^2. Throws std::domain_error when the
/// transfer polynomial vanishes at a real frequency inside the support.
SpectralDensity linear_filter_density(const SpectralDensity& input, const std::vector<double>& coefficients);

/// Time-average estimate of R(k dt) from one grid path (mean removed).
/// Throws std::invalid_argument when a lag reaches the path length.
std::vector<double> estimate_correlation(const std::vector<double>& samples, const std::vector<std::size_t>& lags);

/// Average of the single-path estimates over an ensemble.
std::vector<double> estimate_correlation(const PathEnsemble& ensemble, const std::vector<std::size_t>& lags);

}  // namespace stochlab::spectral
