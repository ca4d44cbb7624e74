#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "stochlab/rng.hpp"

namespace stochlab::ergodic {

/// Measure-preserving map of [0,1).
struct IntervalMap {
  enum class Kind { Rotation, Gauss };
  Kind kind = Kind::Rotation;
  double alpha = 0.0;  ///< rotation angle, reduced to [0,1)

  static IntervalMap rotation(double alpha);
  static IntervalMap gauss();

  double operator()(double x) const;
  /// Density of the invariant measure: 1, or 1/((1+x) ln 2).
  double density(double x) const;
  /// Invariant measure of [0, x).
  double cdf(double x) const;
};

/// Indicator of [lo, hi).
std::function<double(double)> indicator(double lo, double hi);

/// (1/N) sum_{k=1..N} f(T^k x0).
double birkhoff_average(const IntervalMap& map, const std::function<double(double)>& f, double x0, std::size_t n);

struct DigitFrequencies {
  std::array<std::uint64_t, 10> counts{};  ///< counts[d] for d = 1..9
  std::uint64_t total = 0;

  double frequency(int digit) const;
  /// log10(1 + 1/d)
  static double theory(int digit);
};

/// Leading digits of 2^k for k = 1..kmax, from frac(k log10 2) kept in
/// 128-bit fixed point.
DigitFrequencies first_digit_frequencies(std::uint64_t kmax);

struct GaussDigits {
  std::vector<std::uint64_t> counts;  ///< counts[m] for m = 1..max_digit, counts[0] unused
  std::uint64_t overflow = 0;         ///< digits above max_digit
  std::uint64_t total = 0;
  std::size_t terminated = 0;         ///< seeds whose orbit reached 0

  double frequency(std::size_t m) const;
  /// log2(1 + 1/(m(m+2)))
  static double theory(std::size_t m);
};

/// Continued-fraction digits of each seed by iterating the Gauss map,
/// up to `digits` per seed.
GaussDigits gauss_digit_frequencies(const std::vector<double>& seeds, std::size_t digits, std::size_t max_digit = 64);
/// Same, with `seeds` uniform starting points drawn from child streams of src.
GaussDigits gauss_digit_frequencies(const RandomSource& src, std::size_t seeds, std::size_t digits,
                                    std::size_t max_digit = 64);

enum class McMode { Iid, Rotation };

/// Mean of f over N points: i.i.d. uniforms, or the orbit frac(x0 + k alpha)
/// of a random x0.
double mc_integrate(const std::function<double(double)>& f, McMode mode, std::size_t n, const RandomSource& src,
                    double alpha = 0.41421356237309504880);

}  // namespace stochlab::ergodic
