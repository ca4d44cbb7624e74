#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace stochlab::stats {

double normal_cdf(double x) noexcept;

/// Running mean / variance (Welford).
class Moments {
 public:
  void add(double x) noexcept;
  void merge(const Moments& other) noexcept;

  std::size_t count() const noexcept { return n_; }
  double mean() const noexcept { return mean_; }
  /// Unbiased sample variance; 0 for fewer than two observations.
  double variance() const noexcept;
  double std_error() const noexcept;

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

double mean(std::span<const double> xs) noexcept;
double variance(std::span<const double> xs) noexcept;
/// Sample kurtosis m4 / m2^2 (3 for a Gaussian).
double kurtosis(std::span<const double> xs) noexcept;
double covariance(std::span<const double> xs, std::span<const double> ys) noexcept;
double correlation(std::span<const double> xs, std::span<const double> ys) noexcept;

/// Kolmogorov-Smirnov statistic sup|F_n - F| of a sample against a
/// continuous CDF.
double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf);

/// KS distance between the empirical law of integer counts and a discrete
/// CDF F(k) = P(X <= k), evaluated on the integer support.
double ks_statistic_discrete(std::span<const long long> sample,
                             const std::function<double(long long)>& cdf);

/// Asymptotic one-sample KS critical value at level alpha (0.05 or 0.01
/// coefficients 1.358 / 1.628; other levels via the Kolmogorov tail series).
double ks_critical(std::size_t n, double alpha);

/// Upper tail probability of the chi-square law.
double chi_square_sf(double statistic, double dof);

/// Pearson statistic for observed counts against expected probabilities.
/// Cells with expected count below min_expected are pooled into their
/// neighbour before the statistic is formed. Returns {statistic, dof}.
struct ChiSquare {
  double statistic;
  double dof;
  double p_value;
};
ChiSquare chi_square_test(std::span<const double> observed, std::span<const double> probabilities,
                          double min_expected = 5.0);

}  // namespace stochlab::stats
