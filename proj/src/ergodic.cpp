#include "stochlab/ergodic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "stochlab/parallel.hpp"

namespace stochlab::ergodic {
namespace {

using u128 = unsigned __int128;

constexpr u128 fixed(std::uint64_t hi, std::uint64_t lo) { return (static_cast<u128>(hi) << 64) | lo; }

// floor(2^128 log10 m) for m = 2..9
constexpr std::array<u128, 8> kLog10 = {
    fixed(0x4d104d427de7fbccULL, 0x47c4acd605be48bcULL), fixed(0x7a249e593f57f423ULL, 0x0c0d0ea086890763ULL),
    fixed(0x9a209a84fbcff798ULL, 0x8f8959ac0b7c9178ULL), fixed(0xb2efb2bd82180433ULL, 0xb83b5329fa41b743ULL),
    fixed(0xc734eb9bbd3fefefULL, 0x53d1bb768c47501fULL), fixed(0xd858585bc661f94bULL, 0x692ff8a805fda2daULL),
    fixed(0xe730e7c779b7f364ULL, 0xd74e0682113ada34ULL), fixed(0xf4493cb27eafe846ULL, 0x181a1d410d120ec7ULL),
};

double frac(double x) {
  const double f = x - std::floor(x);
  return f < 1.0 ? f : 0.0;
}

}  // namespace

IntervalMap IntervalMap::rotation(double alpha) {
  if (!std::isfinite(alpha)) throw std::invalid_argument("rotation angle must be finite");
  return {Kind::Rotation, frac(alpha)};
}

IntervalMap IntervalMap::gauss() { return {Kind::Gauss, 0.0}; }

double IntervalMap::operator()(double x) const {
  if (kind == Kind::Rotation) {
    const double y = x + alpha;
    return y >= 1.0 ? y - 1.0 : y;
  }
  if (x <= 0.0) return 0.0;
  return frac(1.0 / x);
}

double IntervalMap::density(double x) const {
  if (x < 0.0 || x >= 1.0) return 0.0;
  return kind == Kind::Rotation ? 1.0 : 1.0 / ((1.0 + x) * std::numbers::ln2);
}

double IntervalMap::cdf(double x) const {
  x = std::clamp(x, 0.0, 1.0);
  return kind == Kind::Rotation ? x : std::log2(1.0 + x);
}

std::function<double(double)> indicator(double lo, double hi) {
  return [lo, hi](double x) { return (x >= lo && x < hi) ? 1.0 : 0.0; };
}

double birkhoff_average(const IntervalMap& map, const std::function<double(double)>& f, double x0, std::size_t n) {
  if (n == 0) throw std::invalid_argument("birkhoff_average: N must be positive");
  double x = x0, acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    x = map(x);
    acc += f(x);
  }
  return acc / static_cast<double>(n);
}

double DigitFrequencies::frequency(int digit) const {
  if (digit < 1 || digit > 9) throw std::out_of_range("digit must be 1..9");
  return total ? static_cast<double>(counts[static_cast<std::size_t>(digit)]) / static_cast<double>(total) : 0.0;
}

double DigitFrequencies::theory(int digit) { return std::log10(1.0 + 1.0 / digit); }

DigitFrequencies first_digit_frequencies(std::uint64_t kmax) {
  if (kmax < 1) throw std::invalid_argument("first_digit_frequencies: kmax must be >= 1");
  DigitFrequencies out;
  u128 phase = 0;  // frac(k log10 2) scaled by 2^128; wraps mod 1
  for (std::uint64_t k = 1; k <= kmax; ++k) {
    phase += kLog10[0];
    int d = 1;
    while (d < 9 && phase >= kLog10[static_cast<std::size_t>(d - 1)]) ++d;
    ++out.counts[static_cast<std::size_t>(d)];
  }
  out.total = kmax;
  return out;
}

double GaussDigits::frequency(std::size_t m) const {
  if (m == 0 || m >= counts.size()) return 0.0;
  return total ? static_cast<double>(counts[m]) / static_cast<double>(total) : 0.0;
}

double GaussDigits::theory(std::size_t m) {
  const double md = static_cast<double>(m);
  return std::log2(1.0 + 1.0 / (md * (md + 2.0)));
}

GaussDigits gauss_digit_frequencies(const std::vector<double>& seeds, std::size_t digits, std::size_t max_digit) {
  if (max_digit < 1) throw std::invalid_argument("gauss_digit_frequencies: max_digit must be >= 1");
  const std::size_t n = seeds.size();
  std::vector<std::vector<std::uint64_t>> counts(n);
  std::vector<std::uint64_t> overflow(n, 0);
  std::vector<char> stopped(n, 0);
  parallel_for(n, [&](std::size_t s) {
    auto& c = counts[s];
    c.assign(max_digit + 1, 0);
    double x = frac(seeds[s]);
    for (std::size_t k = 0; k < digits; ++k) {
      if (x <= 0.0) {
        stopped[s] = 1;
        break;
      }
      double a;
      if (x < 1e-12) {
        const long double y = 1.0L / static_cast<long double>(x);
        const long double fl = std::floor(y);
        a = static_cast<double>(fl);
        x = static_cast<double>(y - fl);
      } else {
        const double y = 1.0 / x;
        a = std::floor(y);
        x = y - a;
      }
      if (x >= 1.0) x = 0.0;
      if (a <= static_cast<double>(max_digit))
        ++c[static_cast<std::size_t>(a)];
      else
        ++overflow[s];
    }
  });
  GaussDigits out;
  out.counts.assign(max_digit + 1, 0);
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t m = 1; m <= max_digit; ++m) {
      out.counts[m] += counts[s][m];
      out.total += counts[s][m];
    }
    out.overflow += overflow[s];
    out.total += overflow[s];
    out.terminated += stopped[s];
  }
  return out;
}

GaussDigits gauss_digit_frequencies(const RandomSource& src, std::size_t seeds, std::size_t digits,
                                    std::size_t max_digit) {
  std::vector<double> x0(seeds);
  for (std::size_t s = 0; s < seeds; ++s) x0[s] = src.child(s).stream().uniform_positive();
  return gauss_digit_frequencies(x0, digits, max_digit);
}

double mc_integrate(const std::function<double(double)>& f, McMode mode, std::size_t n, const RandomSource& src,
                    double alpha) {
  if (n == 0) throw std::invalid_argument("mc_integrate: N must be positive");
  Rng rng = src.stream();
  double acc = 0.0;
  if (mode == McMode::Iid) {
    for (std::size_t k = 0; k < n; ++k) acc += f(rng.uniform());
  } else {
    const long double x0 = rng.uniform();
    const long double a = static_cast<long double>(alpha);
    for (std::size_t k = 0; k < n; ++k) {
      const long double y = x0 + static_cast<long double>(k) * a;
      acc += f(static_cast<double>(y - std::floor(y)));
    }
  }
  return acc / static_cast<double>(n);
}

}  // namespace stochlab::ergodic
