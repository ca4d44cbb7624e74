#include "stochlab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <boost/math/distributions/chi_squared.hpp>

namespace stochlab::stats {

double normal_cdf(double x) noexcept { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

void Moments::add(double x) noexcept {
  ++n_;
  const double delta = x - mean_;
  mean_ += delta / static_cast<double>(n_);
  m2_ += delta * (x - mean_);
}

void Moments::merge(const Moments& other) noexcept {
  if (other.n_ == 0) return;
  if (n_ == 0) {
    *this = other;
    return;
  }
  const double n = static_cast<double>(n_ + other.n_);
  const double delta = other.mean_ - mean_;
  mean_ += delta * static_cast<double>(other.n_) / n;
  m2_ += other.m2_ + delta * delta * static_cast<double>(n_) * static_cast<double>(other.n_) / n;
  n_ += other.n_;
}

double Moments::variance() const noexcept { return n_ < 2 ? 0.0 : m2_ / static_cast<double>(n_ - 1); }

double Moments::std_error() const noexcept {
  return n_ == 0 ? 0.0 : std::sqrt(variance() / static_cast<double>(n_));
}

double mean(std::span<const double> xs) noexcept {
  if (xs.empty()) return 0.0;
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double variance(std::span<const double> xs) noexcept {
  Moments m;
  for (double x : xs) m.add(x);
  return m.variance();
}

double kurtosis(std::span<const double> xs) noexcept {
  const double mu = mean(xs);
  double m2 = 0.0, m4 = 0.0;
  for (double x : xs) {
    const double d2 = (x - mu) * (x - mu);
    m2 += d2;
    m4 += d2 * d2;
  }
  const auto n = static_cast<double>(xs.size());
  m2 /= n;
  m4 /= n;
  return m4 / (m2 * m2);
}

double covariance(std::span<const double> xs, std::span<const double> ys) noexcept {
  const std::size_t n = std::min(xs.size(), ys.size());
  if (n < 2) return 0.0;
  const double mx = mean(xs.first(n)), my = mean(ys.first(n));
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += (xs[i] - mx) * (ys[i] - my);
  return acc / static_cast<double>(n - 1);
}

double correlation(std::span<const double> xs, std::span<const double> ys) noexcept {
  const double c = covariance(xs, ys);
  const double vx = covariance(xs, xs), vy = covariance(ys, ys);
  if (vx <= 0.0 || vy <= 0.0) return 0.0;
  return c / std::sqrt(vx * vy);
}

double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf) {
  if (sample.empty()) throw std::invalid_argument("ks_statistic: empty sample");
  std::sort(sample.begin(), sample.end());
  const auto n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

double ks_statistic_discrete(std::span<const long long> sample,
                             const std::function<double(long long)>& cdf) {
  if (sample.empty()) throw std::invalid_argument("ks_statistic_discrete: empty sample");
  std::vector<long long> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());
  const auto n = static_cast<double>(sorted.size());
  double d = 0.0;
  std::size_t i = 0;
  for (long long k = sorted.front(); k <= sorted.back(); ++k) {
    while (i < sorted.size() && sorted[i] <= k) ++i;
    d = std::max(d, std::fabs(static_cast<double>(i) / n - cdf(k)));
  }
  // below the sample minimum the empirical CDF is zero
  d = std::max(d, cdf(sorted.front() - 1));
  return d;
}

double ks_critical(std::size_t n, double alpha) {
  double c;
  if (std::fabs(alpha - 0.05) < 1e-12) {
    c = 1.358;
  } else if (std::fabs(alpha - 0.01) < 1e-12) {
    c = 1.628;
  } else {
    // invert 2 sum (-1)^{k-1} exp(-2 k^2 c^2) = alpha by bisection
    auto tail = [](double x) {
      double s = 0.0;
      for (int k = 1; k < 100; ++k) s += ((k % 2) ? 2.0 : -2.0) * std::exp(-2.0 * k * k * x * x);
      return s;
    };
    double lo = 0.2, hi = 4.0;
    for (int it = 0; it < 100; ++it) {
      const double mid = 0.5 * (lo + hi);
      (tail(mid) > alpha ? lo : hi) = mid;
    }
    c = 0.5 * (lo + hi);
  }
  return c / std::sqrt(static_cast<double>(n));
}

double chi_square_sf(double statistic, double dof) {
  if (dof <= 0.0) return 1.0;
  boost::math::chi_squared dist(dof);
  return boost::math::cdf(boost::math::complement(dist, std::max(0.0, statistic)));
}

ChiSquare chi_square_test(std::span<const double> observed, std::span<const double> probabilities,
                          double min_expected) {
  if (observed.size() != probabilities.size() || observed.empty())
    throw std::invalid_argument("chi_square_test: size mismatch");
  const double total = std::accumulate(observed.begin(), observed.end(), 0.0);
  std::vector<double> obs, expct;
  double o_acc = 0.0, e_acc = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    o_acc += observed[i];
    e_acc += probabilities[i] * total;
    if (e_acc >= min_expected) {
      obs.push_back(o_acc);
      expct.push_back(e_acc);
      o_acc = e_acc = 0.0;
    }
  }
  if (e_acc > 0.0 || o_acc > 0.0) {
    if (expct.empty()) {
      obs.push_back(o_acc);
      expct.push_back(e_acc);
    } else {
      obs.back() += o_acc;
      expct.back() += e_acc;
    }
  }
  double stat = 0.0;
  for (std::size_t i = 0; i < obs.size(); ++i) {
    if (expct[i] > 0.0) stat += (obs[i] - expct[i]) * (obs[i] - expct[i]) / expct[i];
  }
  const double dof = static_cast<double>(obs.size()) - 1.0;
  return {stat, dof, chi_square_sf(stat, dof)};
}

}  // namespace stochlab::stats
