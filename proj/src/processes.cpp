#include "stochlab/processes.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "stochlab/parallel.hpp"
#include "stochlab/stats.hpp"

namespace stochlab::proc {
namespace {

using Index = Eigen::Index;

void check_grid(const std::vector<double>& grid) {
  if (grid.size() < 2) throw std::invalid_argument("grid needs at least two points");
  if (grid.front() != 0.0) throw std::invalid_argument("grid must start at 0");
  for (std::size_t k = 1; k < grid.size(); ++k)
    if (!(grid[k] > grid[k - 1])) throw std::invalid_argument("grid must be strictly increasing");
}

McEstimate summarize(const std::vector<double>& xs) {
  stats::Moments m;
  for (double x : xs) m.add(x);
  return {m.mean(), m.std_error(), m.count()};
}

}  // namespace

void GaussianVectorSpec::validate() const {
  if (cov.rows() != cov.cols() || cov.rows() != mean.size())
    throw std::invalid_argument("gaussian spec: mean and covariance sizes differ");
  if ((cov - cov.transpose()).cwiseAbs().maxCoeff() > 1e-12) throw std::invalid_argument("covariance is not symmetric");
  if (cov.rows() > 0) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(cov, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-10) throw std::invalid_argument("covariance is not positive semidefinite");
  }
}

// ---------------------------------------------------------------- Poisson

Trajectory sample_poisson_path(double rate, double t_max, Rng& rng) {
  return sample_compound_poisson(rate, [](Rng&) { return 1.0; }, t_max, rng);
}

Trajectory sample_compound_poisson(double rate, const std::function<double(Rng&)>& jump, double t_max, Rng& rng) {
  if (!(rate > 0.0)) throw std::invalid_argument("Poisson rate must be positive");
  Trajectory path = Trajectory::step(0.0, t_max);
  double t = 0.0, level = 0.0;
  while (true) {
    t += rng.exponential(rate);
    if (t > t_max) break;
    level += jump(rng);
    path.push_event(t, level);
  }
  return path;
}

Trajectory thin(const Trajectory& path, double p, Rng& rng) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("thinning probability must lie in [0,1]");
  if (path.kind != Trajectory::Kind::Step) throw std::invalid_argument("thin: step path required");
  Trajectory out = Trajectory::step(path.values.front(), path.t_end);
  double level = path.values.front();
  for (std::size_t k = 1; k < path.size(); ++k) {
    if (rng.uniform() < p) {
      level += path.values[k] - path.values[k - 1];
      out.push_event(path.times[k], level);
    }
  }
  return out;
}

// ---------------------------------------------------------------- Wiener

Trajectory sample_wiener(double sigma, const std::vector<double>& grid, Rng& rng) {
  if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
  check_grid(grid);
  std::vector<double> w(grid.size(), 0.0);
  for (std::size_t k = 1; k < grid.size(); ++k) w[k] = w[k - 1] + sigma * std::sqrt(grid[k] - grid[k - 1]) * rng.normal();
  return Trajectory::grid(grid, std::move(w));
}

PathEnsemble wiener_ensemble(double sigma, const std::vector<double>& grid, std::size_t paths, const RandomSource& src) {
  PathEnsemble ens;
  ens.grid = grid;
  ens.seed = src.master_seed();
  ens.paths.resize(paths);
  parallel_for(paths, [&](std::size_t p) {
    Rng rng = src.child(p).stream();
    ens.paths[p] = sample_wiener(sigma, grid, rng).values;
  });
  return ens;
}

Trajectory scaled_random_walk(double sigma, std::size_t n, double t_max, Rng& rng) {
  if (n == 0) throw std::invalid_argument("scaled_random_walk: N must be positive");
  if (!(sigma > 0.0) || !(t_max > 0.0)) throw std::invalid_argument("scaled_random_walk: sigma and t_max must be positive");
  const double step = sigma / std::sqrt(static_cast<double>(n));
  const auto steps = static_cast<std::size_t>(std::floor(static_cast<double>(n) * t_max + 1e-9));
  Trajectory path = Trajectory::step(0.0, t_max);
  double x = 0.0;
  for (std::size_t i = 1; i <= steps; ++i) {
    x += (rng.next_u64() >> 63) ? step : -step;
    path.push_event(static_cast<double>(i) / static_cast<double>(n), x);
  }
  return path;
}

double quadratic_variation(const Trajectory& path) {
  double qv = 0.0;
  for (std::size_t k = 1; k < path.size(); ++k) {
    const double d = path.values[k] - path.values[k - 1];
    qv += d * d;
  }
  return qv;
}

double theta_integral(const Trajectory& w, double theta) {
  if (!(theta >= 0.0 && theta <= 1.0)) throw std::invalid_argument("theta must lie in [0,1]");
  double acc = 0.0;
  for (std::size_t k = 1; k < w.size(); ++k) {
    const double a = w.values[k - 1], b = w.values[k];
    acc += ((1.0 - theta) * a + theta * b) * (b - a);
  }
  return acc;
}

Trajectory geometric_brownian(double s0, double a, double sigma, const std::vector<double>& grid, Rng& rng) {
  if (!(s0 > 0.0)) throw std::invalid_argument("S0 must be positive");
  if (sigma < 0.0) throw std::invalid_argument("sigma must be nonnegative");
  check_grid(grid);
  std::vector<double> s(grid.size());
  double w = 0.0;
  s[0] = s0;
  for (std::size_t k = 1; k < grid.size(); ++k) {
    if (sigma > 0.0) w += std::sqrt(grid[k] - grid[k - 1]) * rng.normal();
    s[k] = s0 * std::exp(a * grid[k] + sigma * w - 0.5 * sigma * sigma * grid[k]);
  }
  return Trajectory::grid(grid, std::move(s));
}

// ---------------------------------------------------------------- functionals

double pedestrian_closed_form(double lambda, double a) {
  if (!(lambda > 0.0) || !(a > 0.0)) throw std::invalid_argument("pedestrian: lambda and a must be positive");
  return std::expm1(lambda * a) / lambda;
}

double pedestrian_sample(double lambda, double a, Rng& rng) {
  double t = 0.0;
  while (true) {
    const double gap = rng.exponential(lambda);
    if (gap > a) return t + a;
    t += gap;
  }
}

McEstimate pedestrian_crossing(double lambda, double a, std::size_t runs, const RandomSource& src) {
  pedestrian_closed_form(lambda, a);
  std::vector<double> xs(runs);
  parallel_for(runs, [&](std::size_t r) {
    Rng rng = src.child(r).stream();
    xs[r] = pedestrian_sample(lambda, a, rng);
  });
  return summarize(xs);
}

std::vector<MaxLawPoint> max_law_check(double t_max, const std::vector<double>& xs, std::size_t paths,
                                       std::size_t steps_per_unit, const RandomSource& src) {
  if (!(t_max > 0.0)) throw std::invalid_argument("max_law_check: T must be positive");
  if (paths == 0 || steps_per_unit == 0) throw std::invalid_argument("max_law_check: need paths and steps");
  for (double x : xs)
    if (!(x >= 0.0)) throw std::invalid_argument("max_law_check: x must be nonnegative");
  const auto steps = static_cast<std::size_t>(std::ceil(t_max * static_cast<double>(steps_per_unit)));
  const double sd = std::sqrt(t_max / static_cast<double>(steps));
  std::vector<double> maxima(paths);
  parallel_for(paths, [&](std::size_t p) {
    Rng rng = src.child(p).stream();
    double w = 0.0, m = 0.0;
    for (std::size_t k = 0; k < steps; ++k) {
      w += sd * rng.normal();
      m = std::max(m, w);
    }
    maxima[p] = m;
  });
  std::vector<MaxLawPoint> out;
  for (double x : xs) {
    const auto hits = std::count_if(maxima.begin(), maxima.end(), [x](double m) { return m >= x; });
    out.push_back({x, 2.0 * (1.0 - stats::normal_cdf(x / std::sqrt(t_max))),
                   static_cast<double>(hits) / static_cast<double>(paths)});
  }
  return out;
}

// ---------------------------------------------------------------- Gaussian vectors

namespace {

double wick_sorted(const Matrix& r, const std::vector<std::size_t>& idx, std::map<std::vector<std::size_t>, double>& memo) {
  if (idx.empty()) return 1.0;
  if (auto it = memo.find(idx); it != memo.end()) return it->second;
  const std::size_t first = idx.front();
  double total = 0.0;
  for (std::size_t j = 1; j < idx.size();) {
    std::size_t same = 1;
    while (j + same < idx.size() && idx[j + same] == idx[j]) ++same;
    std::vector<std::size_t> rest;
    rest.reserve(idx.size() - 2);
    for (std::size_t k = 1; k < idx.size(); ++k)
      if (k != j) rest.push_back(idx[k]);
    total += static_cast<double>(same) * r(static_cast<Index>(first), static_cast<Index>(idx[j])) * wick_sorted(r, rest, memo);
    j += same;
  }
  memo.emplace(idx, total);
  return total;
}

}  // namespace

double wick_moment(const Matrix& r, const std::vector<std::size_t>& indices) {
  if (indices.size() > 20) throw std::invalid_argument("wick_moment: at most 20 factors");
  if (r.rows() != r.cols()) throw std::invalid_argument("wick_moment: covariance must be square");
  for (std::size_t i : indices)
    if (i >= static_cast<std::size_t>(r.rows())) throw std::invalid_argument("wick_moment: index out of range");
  if (indices.size() % 2 == 1) return 0.0;
  std::vector<std::size_t> sorted = indices;
  std::sort(sorted.begin(), sorted.end());
  std::map<std::vector<std::size_t>, double> memo;
  return wick_sorted(r, sorted, memo);
}

GaussianConditional gaussian_conditional(const GaussianVectorSpec& spec, const std::vector<std::size_t>& fixed,
                                         const std::vector<double>& values) {
  spec.validate();
  if (fixed.size() != values.size()) throw std::invalid_argument("gaussian_conditional: indices and values differ");
  const auto n = static_cast<std::size_t>(spec.mean.size());
  std::vector<bool> is_fixed(n, false);
  for (std::size_t i : fixed) {
    if (i >= n || is_fixed[i]) throw std::invalid_argument("gaussian_conditional: bad or repeated index");
    is_fixed[i] = true;
  }
  GaussianConditional out;
  for (std::size_t i = 0; i < n; ++i)
    if (!is_fixed[i]) out.free_indices.push_back(i);
  const auto f = static_cast<Index>(out.free_indices.size());
  const auto c = static_cast<Index>(fixed.size());
  Matrix r11(f, f), r12(f, c), r22(c, c);
  Vector m1(f), z(c);
  for (Index a = 0; a < f; ++a) {
    const auto ia = static_cast<Index>(out.free_indices[static_cast<std::size_t>(a)]);
    m1(a) = spec.mean(ia);
    for (Index b = 0; b < f; ++b) r11(a, b) = spec.cov(ia, static_cast<Index>(out.free_indices[static_cast<std::size_t>(b)]));
    for (Index b = 0; b < c; ++b) r12(a, b) = spec.cov(ia, static_cast<Index>(fixed[static_cast<std::size_t>(b)]));
  }
  for (Index a = 0; a < c; ++a) {
    const auto ia = static_cast<Index>(fixed[static_cast<std::size_t>(a)]);
    z(a) = values[static_cast<std::size_t>(a)] - spec.mean(ia);
    for (Index b = 0; b < c; ++b) r22(a, b) = spec.cov(ia, static_cast<Index>(fixed[static_cast<std::size_t>(b)]));
  }
  if (c == 0) return {out.free_indices, m1, r11};
  Eigen::FullPivLU<Matrix> lu(r22);
  lu.setThreshold(1e-12);
  if (!lu.isInvertible()) {
    throw std::domain_error("gaussian_conditional: conditioning covariance is singular; drop dependent coordinates");
  }
  out.mean = m1 + r12 * lu.solve(z);
  out.cov = r11 - r12 * lu.solve(Matrix(r12.transpose()));
  out.cov = 0.5 * (out.cov + out.cov.transpose());
  return out;
}

EnsembleMoments empirical_moments(const PathEnsemble& ens) {
  if (ens.paths.size() < 2) throw std::invalid_argument("empirical_moments: need at least two paths");
  const auto k = static_cast<Index>(ens.grid.size());
  const auto n = static_cast<double>(ens.paths.size());
  Vector mean = Vector::Zero(k);
  for (const auto& p : ens.paths) {
    if (static_cast<Index>(p.size()) != k) throw std::invalid_argument("empirical_moments: path off the shared grid");
    mean += Eigen::Map<const Vector>(p.data(), k);
  }
  mean /= n;
  Matrix r = Matrix::Zero(k, k);
  for (const auto& p : ens.paths) {
    const Vector d = Eigen::Map<const Vector>(p.data(), k) - mean;
    r.selfadjointView<Eigen::Lower>().rankUpdate(d);
  }
  r = Matrix(r.selfadjointView<Eigen::Lower>()) / (n - 1.0);
  return {mean, r};
}

// ---------------------------------------------------------------- Dirichlet

McEstimate dirichlet_monte_carlo(const std::function<double(double, double)>& g, double x, double y, double h,
                                 std::size_t walks, const RandomSource& src, const Rectangle& box) {
  if (!(h > 0.0)) throw std::invalid_argument("dirichlet: step must be positive");
  if (walks == 0) throw std::invalid_argument("dirichlet: need at least one walk");
  const double wx_span = (box.x1 - box.x0) / h, wy_span = (box.y1 - box.y0) / h;
  const auto nx = static_cast<long>(std::lround(wx_span));
  const auto ny = static_cast<long>(std::lround(wy_span));
  if (nx < 2 || ny < 2 || std::fabs(wx_span - nx) > 1e-9 * wx_span || std::fabs(wy_span - ny) > 1e-9 * wy_span)
    throw std::invalid_argument("dirichlet: box sides must be integer multiples of h (at least 2 steps)");
  if (!(x >= box.x0 && x <= box.x1 && y >= box.y0 && y <= box.y1))
    throw std::invalid_argument("dirichlet: start point outside the domain");

  auto split = [](double f, long n) {
    long i = static_cast<long>(std::floor(f + 1e-9));
    double w = f - static_cast<double>(i);
    if (w < 1e-9) w = 0.0;
    if (i >= n) i = n, w = 0.0;
    return std::pair{i, w};
  };
  const auto [ix, fx] = split((x - box.x0) / h, nx);
  const auto [iy, fy] = split((y - box.y0) / h, ny);

  std::vector<double> values(walks);
  parallel_for(walks, [&](std::size_t w) {
    Rng rng = src.child(w).stream();
    long i = ix + (fx > 0.0 && rng.uniform() < fx ? 1 : 0);
    long j = iy + (fy > 0.0 && rng.uniform() < fy ? 1 : 0);
    while (i > 0 && i < nx && j > 0 && j < ny) {
      switch (rng.below(4)) {
        case 0: ++i; break;
        case 1: --i; break;
        case 2: ++j; break;
        default: --j; break;
      }
    }
    values[w] = g(box.x0 + static_cast<double>(i) * h, box.y0 + static_cast<double>(j) * h);
  });
  return summarize(values);
}

}  // namespace stochlab::proc
