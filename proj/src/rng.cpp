#include "stochlab/rng.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace stochlab {
namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

RandomSource RandomSource::child(std::uint64_t index) const noexcept {
  return RandomSource(master_seed_, mix64(stream_id_ + kGolden) ^ mix64(index * kGolden + 0x632be59bd9b4e019ULL));
}

Rng RandomSource::stream() const noexcept { return Rng(*this); }

Rng::Rng(const RandomSource& src) noexcept {
  // splitmix64 expansion of the combined key
  std::uint64_t x = mix64(src.master_seed()) ^ mix64(src.stream_id() ^ 0xd1b54a32d192ed03ULL);
  for (auto& word : s_) {
    x += kGolden;
    word = mix64(x);
  }
  if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
}

std::uint64_t Rng::next_u64() noexcept {
  const std::uint64_t result = std::rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = std::rotl(s_[3], 45);
  return result;
}

double Rng::exponential(double rate) {
  if (!(rate > 0.0)) throw std::invalid_argument("exponential: rate must be positive");
  return -std::log(uniform_positive()) / rate;
}

double Rng::normal() noexcept {
  if (has_cached_normal_) {
    has_cached_normal_ = false;
    return cached_normal_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  cached_normal_ = v * f;
  has_cached_normal_ = true;
  return u * f;
}

std::uint64_t Rng::below(std::uint64_t n) noexcept {
  // Lemire's multiply-shift with rejection
  unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * n;
  auto low = static_cast<std::uint64_t>(m);
  if (low < n) {
    const std::uint64_t threshold = (0 - n) % n;
    while (low < threshold) {
      m = static_cast<unsigned __int128>(next_u64()) * n;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

double sample_uniform(Rng& rng) { return rng.uniform(); }

double sample_exponential(Rng& rng, double rate) { return rng.exponential(rate); }

std::uint64_t sample_poisson(Rng& rng, double mean) {
  if (!(mean > 0.0)) {
    if (mean == 0.0) return 0;
    throw std::invalid_argument("poisson: mean must be nonnegative");
  }
  if (mean < 10.0) {
    // inversion by sequential search
    double p = std::exp(-mean);
    double cdf = p;
    const double u = rng.uniform();
    std::uint64_t k = 0;
    while (u > cdf) {
      ++k;
      p *= mean / static_cast<double>(k);
      cdf += p;
      if (p < 1e-300 && cdf >= 1.0 - 1e-16) break;
    }
    return k;
  }
  // PTRS transformed rejection (Hoermann 1993)
  const double smu = std::sqrt(mean);
  const double b = 0.931 + 2.53 * smu;
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double vr = 0.9277 - 3.6224 / (b - 2.0);
  const double log_mean = std::log(mean);
  for (;;) {
    const double u = rng.uniform() - 0.5;
    const double v = rng.uniform();
    const double us = 0.5 - std::fabs(u);
    const double k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
    if (us >= 0.07 && v <= vr) return static_cast<std::uint64_t>(k);
    if (k < 0.0 || (us < 0.013 && v > us)) continue;
    if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
        -mean + k * log_mean - std::lgamma(k + 1.0)) {
      return static_cast<std::uint64_t>(k);
    }
  }
}

double sample_gamma(Rng& rng, double shape) {
  if (!(shape > 0.0)) throw std::invalid_argument("gamma: shape must be positive");
  if (shape < 1.0) {
    const double g = sample_gamma(rng, shape + 1.0);
    return g * std::pow(rng.uniform_positive(), 1.0 / shape);
  }
  // Marsaglia-Tsang
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = rng.normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform_positive();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double sample_beta(Rng& rng, double w, double l) {
  if (!(w >= 0.0) || !(l >= 0.0)) throw std::invalid_argument("beta: counts must be nonnegative");
  const double x = sample_gamma(rng, w + 1.0);
  const double y = sample_gamma(rng, l + 1.0);
  return x / (x + y);
}

void validate(const DistributionFamily& spec) {
  std::visit(
      [](const auto& f) {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, family::Bernoulli>) {
          if (!(f.p >= 0.0 && f.p <= 1.0)) throw std::invalid_argument("bernoulli: p must lie in [0,1]");
        } else if constexpr (std::is_same_v<T, family::Poisson>) {
          if (!(f.mean > 0.0)) throw std::invalid_argument("poisson: mean must be positive");
        } else if constexpr (std::is_same_v<T, family::Normal>) {
          if (!(f.variance >= 0.0) || !std::isfinite(f.mean))
            throw std::invalid_argument("normal: variance must be nonnegative");
        } else if constexpr (std::is_same_v<T, family::Beta>) {
          if (!(f.w >= 0.0) || !(f.l >= 0.0)) throw std::invalid_argument("beta: w and l must be nonnegative");
        } else {
          double total = 0.0;
          for (double w : f.weights) {
            if (!(w >= 0.0)) throw std::invalid_argument("categorical: weights must be nonnegative");
            total += w;
          }
          if (!(total > 0.0)) throw std::invalid_argument("categorical: weights must sum to a positive value");
        }
      },
      spec);
}

double sample_family(Rng& rng, const DistributionFamily& spec) {
  validate(spec);
  return std::visit(
      [&rng](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, family::Bernoulli>) {
          return rng.bernoulli(f.p) ? 1.0 : 0.0;
        } else if constexpr (std::is_same_v<T, family::Poisson>) {
          return static_cast<double>(sample_poisson(rng, f.mean));
        } else if constexpr (std::is_same_v<T, family::Normal>) {
          return rng.normal(f.mean, std::sqrt(f.variance));
        } else if constexpr (std::is_same_v<T, family::Beta>) {
          return sample_beta(rng, f.w, f.l);
        } else {
          return static_cast<double>(CategoricalSampler(f.weights)(rng));
        }
      },
      spec);
}

CategoricalSampler::CategoricalSampler(const std::vector<double>& weights) {
  validate(family::Categorical{weights});
  cdf_.resize(weights.size());
  std::partial_sum(weights.begin(), weights.end(), cdf_.begin());
  const double total = cdf_.back();
  for (double& c : cdf_) c /= total;
  std::size_t last = weights.size() - 1;
  while (weights[last] == 0.0) --last;
  std::fill(cdf_.begin() + static_cast<std::ptrdiff_t>(last), cdf_.end(), 1.0);
}

std::size_t CategoricalSampler::operator()(Rng& rng) const {
  const double u = rng.uniform();
  auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  auto idx = static_cast<std::size_t>(it - cdf_.begin());
  if (idx >= cdf_.size()) idx = cdf_.size() - 1;
  return idx;
}

}  // namespace stochlab
