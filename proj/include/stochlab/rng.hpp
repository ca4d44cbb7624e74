#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <variant>
#include <vector>

namespace stochlab {

/// Default master seed used when neither --seed nor STOCHLAB_SEED is given.
inline constexpr std::uint64_t kDefaultSeed = 20240607ULL;

class Rng;

/// Immutable description of one random stream: a master seed plus a stream
/// index. Streams are derived by hashing (seed, stream_id) into generator
/// state, so stream k can be created without touching streams 0..k-1.
class RandomSource {
 public:
  constexpr explicit RandomSource(std::uint64_t master_seed = kDefaultSeed,
                                  std::uint64_t stream_id = 0) noexcept
      : master_seed_(master_seed), stream_id_(stream_id) {}

  std::uint64_t master_seed() const noexcept { return master_seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

  /// Descriptor for the index-th child stream (path, walker, run...).
  RandomSource child(std::uint64_t index) const noexcept;

  /// Fresh generator positioned at the start of this stream.
  Rng stream() const noexcept;

  friend bool operator==(const RandomSource&, const RandomSource&) = default;

 private:
  std::uint64_t master_seed_;
  std::uint64_t stream_id_;
};

/// xoshiro256** engine with samplers. Satisfies UniformRandomBitGenerator.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(const RandomSource& src) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }
  result_type operator()() noexcept { return next_u64(); }

  std::uint64_t next_u64() noexcept;

  /// Uniform on [0,1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform on (0,1): a zero draw is remapped to the smallest positive double.
  double uniform_positive() noexcept {
    const double u = uniform();
    return u > 0.0 ? u : std::numeric_limits<double>::denorm_min();
  }

  /// Exp(rate) by inverse transform, -ln(U)/rate.
  double exponential(double rate);

  /// Standard normal (Marsaglia polar method; second variate is cached).
  double normal() noexcept;
  double normal(double mean, double stddev) noexcept { return mean + stddev * normal(); }

  bool bernoulli(double p) noexcept { return uniform() < p; }

  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n) noexcept;

 private:
  std::array<std::uint64_t, 4> s_{};
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

/// Independent-sample helpers over an Rng.
double sample_uniform(Rng& rng);
double sample_exponential(Rng& rng, double rate);
std::uint64_t sample_poisson(Rng& rng, double mean);
double sample_gamma(Rng& rng, double shape);

/// Beta law in the Bayesian-bandit parametrization: density proportional to
/// x^w (1-x)^l, so Beta(0,0) is U(0,1).
double sample_beta(Rng& rng, double w, double l);

namespace family {
struct Bernoulli { double p; };
struct Poisson { double mean; };
struct Normal { double mean; double variance; };
struct Beta { double w; double l; };
struct Categorical { std::vector<double> weights; };
}  // namespace family

using DistributionFamily = std::variant<family::Bernoulli, family::Poisson, family::Normal,
                                        family::Beta, family::Categorical>;

/// Throws std::invalid_argument on bad parameters.
void validate(const DistributionFamily& spec);

/// Draw from the named law. Bernoulli returns 0/1, Categorical returns the index.
double sample_family(Rng& rng, const DistributionFamily& spec);

/// Precomputed cumulative table for repeated categorical draws.
class CategoricalSampler {
 public:
  CategoricalSampler() = default;
  explicit CategoricalSampler(const std::vector<double>& weights);

  std::size_t operator()(Rng& rng) const;
  std::size_t size() const noexcept { return cdf_.size(); }

 private:
  std::vector<double> cdf_;
};

}  // namespace stochlab
