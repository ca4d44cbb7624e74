#pragma once

// Independent reference computations used by the unit and acceptance tests.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

/// Ordinary least squares of y on [1, x]: prediction at x0 with its standard
/// error, plus the residual variance and its standard error.
struct Regression {
  double prediction;
  double prediction_se;
  double residual_variance;
  double residual_variance_se;
};

inline Regression regress(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& x0) {
  const Eigen::Index n = x.rows(), p = x.cols() + 1;
  Eigen::MatrixXd design(n, p);
  design.col(0).setOnes();
  design.rightCols(p - 1) = x;
  const Eigen::MatrixXd xtx = design.transpose() * design;
  const Eigen::VectorXd beta = xtx.ldlt().solve(design.transpose() * y);
  const Eigen::VectorXd resid = y - design * beta;
  const double s2 = resid.squaredNorm() / static_cast<double>(n - p);
  Eigen::VectorXd z(p);
  z(0) = 1.0;
  z.tail(p - 1) = x0;
  const double var_pred = s2 * z.dot(xtx.ldlt().solve(z));
  return {z.dot(beta), std::sqrt(var_pred), s2, s2 * std::sqrt(2.0 / static_cast<double>(n - p))};
}

/// Leading decimal digit of 2^k for every k in [0, kmax], by exact decimal
/// doubling (little-endian base 1e9 limbs).
inline std::vector<int> leading_digits_of_powers_of_two(int kmax) {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(kmax) + 1);
  std::vector<std::uint32_t> limbs{1};
  for (int k = 0; k <= kmax; ++k) {
    std::uint32_t top = limbs.back();
    while (top >= 10) top /= 10;
    out.push_back(static_cast<int>(top));
    std::uint32_t carry = 0;
    for (auto& l : limbs) {
      const std::uint64_t v = 2ULL * l + carry;
      l = static_cast<std::uint32_t>(v % 1000000000ULL);
      carry = static_cast<std::uint32_t>(v / 1000000000ULL);
    }
    if (carry) limbs.push_back(carry);
  }
  return out;
}

/// Poisson CDF by direct summation.
inline double poisson_cdf(long long k, double mean) {
  if (k < 0) return 0.0;
  double term = std::exp(-mean), sum = term;
  for (long long j = 1; j <= k; ++j) {
    term *= mean / static_cast<double>(j);
    sum += term;
  }
  return std::min(1.0, sum);
}

/// Success probability of the skip-(s-1)-then-take-first-record rule by
/// enumerating every permutation of n ranks (n <= 9).
inline double secretary_brute_force(int n, int threshold) {
  std::vector<int> perm(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
  long wins = 0, total = 0;
  do {
    ++total;
    int best_seen = -1;
    for (int i = 0; i < threshold - 1; ++i) best_seen = std::max(best_seen, perm[static_cast<std::size_t>(i)]);
    int chosen = -1;
    for (int i = threshold - 1; i < n; ++i) {
      if (perm[static_cast<std::size_t>(i)] > best_seen) {
        chosen = perm[static_cast<std::size_t>(i)];
        break;
      }
    }
    if (chosen == n - 1) ++wins;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return static_cast<double>(wins) / static_cast<double>(total);
}

}  // namespace oracle
