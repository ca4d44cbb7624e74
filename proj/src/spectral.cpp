#include "stochlab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

namespace stochlab::spectral {
namespace {

constexpr double kPi = std::numbers::pi;

double simpson_step(const std::function<double(double)>& f, double a, double fa, double m, double fm, double b,
                    double fb, double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_step(f, a, fa, lm, flm, m, fm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, fm, rm, frm, b, fb, right, 0.5 * tol, depth - 1);
}

// max |f| on five equispaced nodes of [a, b]
double envelope(const std::function<double(double)>& f, double a, double b) {
  double e = 0.0;
  for (int k = 0; k <= 4; ++k) e = std::max(e, std::fabs(f(a + (b - a) * k / 4.0)));
  return e;
}

// iterated averaging of neighbouring partial sums of an alternating series
double accelerate(const std::vector<double>& partial, std::size_t levels) {
  std::vector<double> v(partial.end() - static_cast<std::ptrdiff_t>(levels + 1), partial.end());
  for (std::size_t l = 0; l < levels; ++l)
    for (std::size_t i = 0; i + 1 < v.size() - l; ++i) v[i] = 0.5 * (v[i] + v[i + 1]);
  return v.front();
}

// Probe |f| on [T/8, T/4] and [T/2, T] for T = 64 s, 128 s, ...  An envelope
// shrinking by less than 4^-1.1 between the two windows decays too slowly to
// be absolutely integrable.
void check_tail(const std::function<double(double)>& f, const QuadratureSpec& q) {
  constexpr int kSamples = 200;
  constexpr double kRatio = 0.217638;  // 4^-1.1
  const auto window = [&](double a, double b) {
    double e = 0.0;
    for (int k = 0; k <= kSamples; ++k) e = std::max(e, std::fabs(f(a + (b - a) * k / kSamples)));
    return e;
  };
  const double s = q.scale;
  double f0 = window(0.0, s);
  if (f0 == 0.0) f0 = window(0.0, 64.0 * s);
  if (f0 == 0.0) return;
  for (int j = 0; j <= 10; ++j) {
    const double t = 64.0 * s * std::ldexp(1.0, j);
    const double late = window(0.5 * t, t);
    if (late <= q.truncation * f0) return;
    if (late > kRatio * window(0.125 * t, 0.25 * t))
      throw std::domain_error("cosine_integral: divergent tail, integrand is not absolutely integrable");
  }
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol) {
  if (a == b) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_step(f, a, fa, m, fm, b, fb, whole, tol, 48);
}

double cosine_integral(const std::function<double(double)>& f, double omega, double upper, const QuadratureSpec& q) {
  omega = std::fabs(omega);
  const auto g = [&](double t) { return f(t) * std::cos(omega * t); };
  const double s = q.scale;

  if (std::isfinite(upper)) {
    if (upper <= 0.0) return 0.0;
    double h = omega > 0.0 ? std::min(kPi / omega, s) : s;
    auto n = static_cast<std::size_t>(std::ceil(upper / h));
    n = std::clamp<std::size_t>(n, 1, q.max_panels);
    h = upper / static_cast<double>(n);
    double sum = 0.0;
    for (std::size_t k = 0; k < n; ++k) sum += adaptive_simpson(g, k * h, (k + 1) * h, q.abs_tol / static_cast<double>(n));
    return sum;
  }

  check_tail(f, q);

  if (omega == 0.0) {
    // unit panels first, then panels that double in length
    double sum = 0.0, f0 = 0.0, t = 0.0, len = s;
    int quiet = 0;
    for (std::size_t k = 0; k < q.max_panels; ++k) {
      const double piece = adaptive_simpson(g, t, t + len, q.abs_tol);
      const double env = envelope(f, t, t + len);
      sum += piece;
      if (k < 8) f0 = std::max(f0, env);
      if (k >= 8) {
        if (f0 == 0.0) return sum;
        const bool small = std::fabs(piece) <= std::max(q.abs_tol, q.truncation * std::fabs(sum));
        quiet = (env <= q.truncation * f0 && small) || std::fabs(piece) < q.abs_tol ? quiet + 1 : 0;
        if (quiet >= 2) return sum;
      }
      t += len;
      if (k >= 7) len = t;  // next panel is [t, 2t]
      if (t > 1e18 * s) break;
    }
    throw std::runtime_error("cosine_integral: tail did not settle");
  }

  const double half = kPi / omega;
  const auto m = static_cast<std::size_t>(std::max(1.0, std::ceil(half / s)));
  const double h = half / static_cast<double>(m);
  const std::size_t max_half = std::max<std::size_t>(64, q.max_panels / m);
  constexpr std::size_t kLevels = 20;

  std::vector<double> partial;
  double sum = 0.0, f0 = 0.0, last_acc = std::numeric_limits<double>::quiet_NaN();
  int quiet = 0;
  for (std::size_t k = 0; k < max_half; ++k) {
    const double start = static_cast<double>(k) * half;
    double e = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      const double a = start + static_cast<double>(j) * h;
      sum += adaptive_simpson(g, a, a + h, q.abs_tol / static_cast<double>(m));
      e = std::max(e, envelope(f, a, a + h));
    }
    partial.push_back(sum);
    f0 = std::max(f0, k < 4 ? e : 0.0);
    if (k < 4) continue;
    if (f0 == 0.0) return sum;
    quiet = (e <= q.truncation * f0) ? quiet + 1 : 0;
    if (quiet >= 2) return sum;
    if (partial.size() > 32) {
      const double acc = accelerate(partial, kLevels);
      if (std::fabs(acc - last_acc) <= std::max(q.abs_tol, 1e-13 * std::fabs(acc))) return acc;
      last_acc = acc;
    }
  }
  throw std::runtime_error("cosine_integral: oscillatory tail did not settle");
}

// ---------------------------------------------------------------- kernels

CorrelationFunction CorrelationFunction::exponential(double d, double a) {
  if (!(d >= 0.0) || !(a > 0.0)) throw std::invalid_argument("exponential correlation needs D >= 0, a > 0");
  return {[d, a](double t) { return d * std::exp(-a * std::fabs(t)); }, TimeDomain::Continuous, "exp"};
}

CorrelationFunction CorrelationFunction::band_limited(double sigma2, double nu0) {
  if (!(sigma2 >= 0.0) || !(nu0 > 0.0)) throw std::invalid_argument("band correlation needs sigma2 >= 0, nu0 > 0");
  return {[sigma2, nu0](double t) {
            if (std::fabs(t) < 1e-8 / nu0) return sigma2 * nu0 / kPi;
            return sigma2 * std::sin(nu0 * t) / (kPi * t);
          },
          TimeDomain::Continuous, "band"};
}

CorrelationFunction CorrelationFunction::white_noise(double sigma2) {
  if (!(sigma2 >= 0.0)) throw std::invalid_argument("white noise variance must be nonnegative");
  return {[sigma2](double t) { return std::lround(t) == 0 ? sigma2 : 0.0; }, TimeDomain::Discrete, "white"};
}

CorrelationFunction CorrelationFunction::constant(double c) {
  return {[c](double) { return c; }, TimeDomain::Continuous, "constant"};
}

CorrelationFunction CorrelationFunction::cosine(double amplitude, double frequency) {
  return {[amplitude, frequency](double t) { return amplitude * std::cos(frequency * t); }, TimeDomain::Continuous,
          "cos"};
}

CorrelationFunction CorrelationFunction::sampled(std::vector<double> taus, std::vector<double> values) {
  if (taus.empty() || taus.size() != values.size()) throw std::invalid_argument("sampled correlation: bad table");
  if (taus.front() != 0.0) throw std::invalid_argument("sampled correlation must start at lag 0");
  for (std::size_t k = 1; k < taus.size(); ++k)
    if (!(taus[k] > taus[k - 1])) throw std::invalid_argument("sampled correlation lags must increase");
  return {[taus = std::move(taus), values = std::move(values)](double t) {
            t = std::fabs(t);
            if (t > taus.back()) return 0.0;
            const auto it = std::upper_bound(taus.begin(), taus.end(), t);
            const auto k = static_cast<std::size_t>(it - taus.begin()) - 1;
            if (k + 1 >= taus.size()) return values.back();
            const double w = (t - taus[k]) / (taus[k + 1] - taus[k]);
            return (1.0 - w) * values[k] + w * values[k + 1];
          },
          TimeDomain::Continuous, "sampled"};
}

SpectralDensity SpectralDensity::lorentzian(double d, double a) {
  if (!(d >= 0.0) || !(a > 0.0)) throw std::invalid_argument("lorentzian needs D >= 0, a > 0");
  return {[d, a](double nu) { return d * a / (kPi * (a * a + nu * nu)); }, std::numeric_limits<double>::infinity(),
          TimeDomain::Continuous, "lorentzian"};
}

SpectralDensity SpectralDensity::band(double sigma2, double nu0) {
  if (!(sigma2 >= 0.0) || !(nu0 > 0.0)) throw std::invalid_argument("band density needs sigma2 >= 0, nu0 > 0");
  return {[sigma2](double) { return sigma2 / (2.0 * kPi); }, nu0, TimeDomain::Continuous, "band"};
}

SpectralDensity SpectralDensity::flat_discrete(double c) {
  if (!(c >= 0.0)) throw std::invalid_argument("flat density must be nonnegative");
  return {[c](double) { return c; }, kPi, TimeDomain::Discrete, "flat"};
}

// ---------------------------------------------------------------- transforms

SpectralDensity correlation_to_density(const CorrelationFunction& r, const QuadratureSpec& q) {
  if (r.domain == TimeDomain::Discrete) {
    // sum the lags once; rho is then a finite cosine series
    std::vector<double> lags{r(0.0)};
    const double r0 = std::fabs(lags[0]);
    int quiet = 0;
    for (std::size_t k = 1; k < q.max_panels; ++k) {
      const double v = r(static_cast<double>(k));
      lags.push_back(v);
      quiet = std::fabs(v) <= q.truncation * r0 ? quiet + 1 : 0;
      if (quiet >= 8) break;
      if (k + 1 == q.max_panels) throw std::domain_error("correlation_to_density: lags do not decay");
    }
    while (lags.size() > 1 && std::fabs(lags.back()) <= q.truncation * r0) lags.pop_back();
    return {[lags](double nu) {
              double s = lags[0];
              for (std::size_t k = 1; k < lags.size(); ++k) s += 2.0 * lags[k] * std::cos(static_cast<double>(k) * nu);
              return s / (2.0 * kPi);
            },
            kPi, TimeDomain::Discrete, r.tag};
  }
  auto f = r.r;
  return {[f, q](double nu) { return cosine_integral(f, nu, std::numeric_limits<double>::infinity(), q) / kPi; },
          std::numeric_limits<double>::infinity(), TimeDomain::Continuous, r.tag};
}

CorrelationFunction density_to_correlation(const SpectralDensity& rho, const QuadratureSpec& q) {
  auto f = rho.rho;
  const double upper = rho.domain == TimeDomain::Discrete ? std::min(rho.support, kPi) : rho.support;
  return {[f, upper, q](double t) { return 2.0 * cosine_integral(f, t, upper, q); }, rho.domain, rho.tag};
}

DefinitenessCheck check_nonneg_definite(const std::function<double(double)>& r, const std::vector<double>& times) {
  if (times.empty() || times.size() > 512) throw std::invalid_argument("check_nonneg_definite: need 1..512 points");
  const auto n = static_cast<Eigen::Index>(times.size());
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = r(times[static_cast<std::size_t>(i)] - times[static_cast<std::size_t>(j)]);
  m = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  return {lo >= -1e-8 * std::fabs(r(0.0)), lo};
}

// ---------------------------------------------------------------- ergodicity

double ergodic_mean(const Trajectory& path, double t_max) {
  if (!(t_max > 0.0)) throw std::invalid_argument("ergodic_mean: T must be positive");
  if (path.size() < 2) throw std::invalid_argument("ergodic_mean: need at least two samples");
  if (path.times.front() > 0.0 || path.times.back() < t_max) throw std::invalid_argument("ergodic_mean: path does not cover [0, T]");
  double acc = 0.0;
  for (std::size_t k = 1; k < path.size() && path.times[k - 1] < t_max; ++k) {
    const double a = path.times[k - 1];
    const double b = std::min(path.times[k], t_max);
    acc += 0.5 * (path.values[k - 1] + path.value_at(b)) * (b - a);
  }
  return acc / t_max;
}

double ergodicity_criterion(const std::function<double(double)>& r, double t_max, double tol) {
  if (!(t_max > 0.0)) throw std::invalid_argument("ergodicity_criterion: T must be positive");
  const auto g = [&](double tau) { return (1.0 - tau / t_max) * r(tau); };
  const auto panels = static_cast<std::size_t>(std::clamp(std::ceil(t_max), 1.0, 1e5));
  const double h = t_max / static_cast<double>(panels);
  double acc = 0.0;
  for (std::size_t k = 0; k < panels; ++k) acc += adaptive_simpson(g, k * h, (k + 1) * h, tol / static_cast<double>(panels));
  return 2.0 / t_max * acc;
}

double ergodicity_criterion(const std::function<double(double, double)>& r, double t0, double t_max, double tol) {
  if (!(t_max > t0)) throw std::invalid_argument("ergodicity_criterion: need T > t0");
  const double width = t_max - t0;
  // split the inner integral at the diagonal, where R usually has a kink
  const auto inner = [&](double t2) {
    const auto row = [&](double t1) { return r(t1, t2); };
    return adaptive_simpson(row, t0, t2, tol) + adaptive_simpson(row, t2, t_max, tol);
  };
  const auto panels = static_cast<std::size_t>(std::clamp(std::ceil(width), 1.0, 1e4));
  const double h = width / static_cast<double>(panels);
  double acc = 0.0;
  for (std::size_t k = 0; k < panels; ++k) acc += adaptive_simpson(inner, t0 + k * h, t0 + (k + 1) * h, tol);
  return acc / (width * width);
}

SpectralDensity linear_filter_density(const SpectralDensity& input, const std::vector<double>& a) {
  std::size_t degree = a.size();
  while (degree > 0 && a[degree - 1] == 0.0) --degree;
  if (degree == 0) throw std::invalid_argument("linear_filter_density: transfer polynomial is zero");
  if (degree > 1) {
    const auto d = static_cast<Eigen::Index>(degree - 1);
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(d, d);
    for (Eigen::Index i = 1; i < d; ++i) companion(i, i - 1) = 1.0;
    for (Eigen::Index i = 0; i < d; ++i) companion(i, d - 1) = -a[static_cast<std::size_t>(i)] / a[degree - 1];
    Eigen::EigenSolver<Eigen::MatrixXd> es(companion, false);
    for (const auto& s : es.eigenvalues()) {
      if (std::fabs(s.real()) <= 1e-9 * std::max(1.0, std::abs(s)) && std::fabs(s.imag()) <= input.support) {
        throw std::domain_error("linear_filter_density: transfer vanishes at real frequency " + std::to_string(s.imag()));
      }
    }
  }
  auto rho = input.rho;
  std::vector<double> coef(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(degree));
  return {[rho, coef](double nu) {
            std::complex<double> h = 0.0, pw = 1.0;
            const std::complex<double> s(0.0, nu);
            for (double c : coef) {
              h += c * pw;
              pw *= s;
            }
            return rho(nu) / std::norm(h);
          },
          input.support, input.domain, input.tag + "+filter"};
}

std::vector<double> estimate_correlation(const std::vector<double>& x, const std::vector<std::size_t>& lags) {
  const std::size_t n = x.size();
  if (n < 2) throw std::invalid_argument("estimate_correlation: need at least two samples");
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
  std::vector<double> out;
  out.reserve(lags.size());
  for (std::size_t k : lags) {
    if (k >= n) throw std::invalid_argument("estimate_correlation: lag exceeds path length");
    double acc = 0.0;
    for (std::size_t i = 0; i + k < n; ++i) acc += (x[i] - mean) * (x[i + k] - mean);
    out.push_back(acc / static_cast<double>(n - k));
  }
  return out;
}

std::vector<double> estimate_correlation(const PathEnsemble& ens, const std::vector<std::size_t>& lags) {
  if (ens.paths.empty()) throw std::invalid_argument("estimate_correlation: empty ensemble");
  std::vector<double> acc(lags.size(), 0.0);
  for (const auto& p : ens.paths) {
    const auto one = estimate_correlation(p, lags);
    for (std::size_t i = 0; i < lags.size(); ++i) acc[i] += one[i];
  }
  for (double& v : acc) v /= static_cast<double>(ens.paths.size());
  return acc;
}

}  // namespace stochlab::spectral
