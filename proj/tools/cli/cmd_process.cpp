#include <cmath>

#include "commands.hpp"
#include "stochlab/io.hpp"
#include "stochlab/processes.hpp"

namespace stochlab::cli {
namespace {

using namespace stochlab::proc;

Series staircase(const std::string& name, const Trajectory& path) {
  Series s{name, {}, {}};
  for (std::size_t k = 0; k < path.size(); ++k) {
    if (k > 0) {
      s.x.push_back(path.times[k]);
      s.y.push_back(path.values[k - 1]);
    }
    s.x.push_back(path.times[k]);
    s.y.push_back(path.values[k]);
  }
  s.x.push_back(path.t_end);
  s.y.push_back(path.values.back());
  return s;
}

CommandResult poisson_cmd(const Params& p, const RandomSource& src) {
  const double rate = p.real("rate"), t = p.real("time");
  Rng rng = src.child(0).stream();
  const auto path = sample_poisson_path(rate, t, rng);
  CommandResult r;
  r.payload = {{"count", path.values.back()}, {"mean", rate * t}, {"event_times", json::array()}};
  for (std::size_t k = 1; k < path.size(); ++k) r.payload["event_times"].push_back(path.times[k]);
  r.plot.series.push_back(staircase("K", path));
  r.table.header = {"t", "count"};
  for (std::size_t k = 0; k < path.size(); ++k) r.table.rows.push_back({path.times[k], path.values[k]});
  if (p.has("thin")) {
    Rng trng = src.child(1).stream();
    const auto thinned = thin(path, p.real("thin"), trng);
    r.payload["thinned_count"] = thinned.values.back();
    r.plot.series.push_back(staircase("thinned", thinned));
  }
  return r;
}

CommandResult wiener_cmd(const Params& p, const RandomSource& src) {
  const auto paths = p.count("paths");
  if (paths == 0) throw std::invalid_argument("empty ensemble: --paths must be positive");
  const double sigma = p.real("sigma"), t = p.real("time");
  const auto grid = uniform_grid(t, p.count("steps"));
  const auto ens = wiener_ensemble(sigma, grid, paths, src);

  CommandResult r;
  std::vector<double> qv(paths), ito(paths), strat(paths), end(paths);
  std::size_t inside = 0;
  for (std::size_t k = 0; k < paths; ++k) {
    const auto w = ens.path(k);
    qv[k] = quadratic_variation(w);
    ito[k] = ito_integral(w);
    strat[k] = theta_integral(w, 0.5);
    end[k] = w.values.back();
    bool ok = true;
    for (std::size_t i = 0; i < grid.size(); ++i) ok = ok && std::fabs(w.values[i]) <= 3.0 * sigma * std::sqrt(grid[i]);
    inside += ok;
  }
  r.payload = {{"paths", paths},
               {"quadratic_variation", qv},
               {"ito_integral", ito},
               {"stratonovich_integral", strat},
               {"endpoint", end},
               {"inside_envelope_fraction", static_cast<double>(inside) / static_cast<double>(paths)}};

  r.table.header = {"t"};
  for (std::size_t k = 0; k < paths; ++k) r.table.header.push_back("path" + std::to_string(k));
  r.table.header.push_back("upper");
  r.table.header.push_back("lower");
  Series up{"envelope_upper", grid, {}}, lo{"envelope_lower", grid, {}};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double e = 3.0 * sigma * std::sqrt(grid[i]);
    std::vector<json> row{grid[i]};
    for (std::size_t k = 0; k < paths; ++k) row.emplace_back(ens.paths[k][i]);
    row.emplace_back(e);
    row.emplace_back(0.0 - e);
    r.table.rows.push_back(row);
    up.y.push_back(e);
    lo.y.push_back(0.0 - e);
  }
  for (std::size_t k = 0; k < paths; ++k) r.plot.series.push_back({"path" + std::to_string(k), grid, ens.paths[k]});
  r.plot.series.push_back(up);
  r.plot.series.push_back(lo);
  return r;
}

CommandResult pedestrian_cmd(const Params& p, const RandomSource& src) {
  const double lambda = p.real("lambda"), a = p.real("a");
  const auto est = pedestrian_crossing(lambda, a, p.count("runs"), src);
  CommandResult r;
  r.payload = {{"estimate", est.estimate},
               {"std_error", est.std_error},
               {"runs", est.samples},
               {"closed_form", pedestrian_closed_form(lambda, a)}};
  return r;
}

CommandResult max_law_cmd(const Params& p, const RandomSource& src) {
  const auto pts = max_law_check(p.real("time"), p.reals("x"), p.count("paths"), p.count("steps-per-unit"), src);
  CommandResult r;
  json rows = json::array();
  r.table.header = {"x", "empirical", "analytic"};
  Series e{"empirical", {}, {}}, a{"analytic", {}, {}};
  for (const auto& q : pts) {
    rows.push_back({{"x", q.x}, {"empirical", q.empirical}, {"analytic", q.analytic}});
    r.table.rows.push_back({q.x, q.empirical, q.analytic});
    e.x.push_back(q.x);
    e.y.push_back(q.empirical);
    a.x.push_back(q.x);
    a.y.push_back(q.analytic);
  }
  r.payload["points"] = rows;
  r.plot.series = {e, a};
  return r;
}

std::function<double(double, double)> boundary(const std::string& name) {
  if (name == "x2-y2") return [](double x, double y) { return x * x - y * y; };
  if (name == "xy") return [](double x, double y) { return x * y; };
  if (name == "x") return [](double x, double) { return x; };
  if (name == "y") return [](double, double y) { return y; };
  if (name == "exp-cos") return [](double x, double y) { return std::exp(x) * std::cos(y); };
  throw std::invalid_argument("--function must be one of x2-y2, xy, x, y, exp-cos");
}

CommandResult dirichlet_cmd(const Params& p, const RandomSource& src) {
  const auto g = boundary(p.str("function"));
  const double x = p.real("x"), y = p.real("y");
  const auto est = dirichlet_monte_carlo(g, x, y, p.real("step"), p.count("walks"), src);
  CommandResult r;
  // every boundary function offered is harmonic, so g(x, y) is the exact solution
  r.payload = {{"estimate", est.estimate}, {"std_error", est.std_error}, {"walks", est.samples}, {"exact", g(x, y)}};
  return r;
}

CommandResult wick_cmd(const Params& p, const RandomSource&) {
  const auto cov = io::read_matrix_csv(p.str("cov"));
  GaussianVectorSpec spec{Vector::Zero(cov.rows()), cov};
  spec.validate();
  const auto idx = p.counts("indices");
  for (auto i : idx)
    if (i >= static_cast<std::size_t>(cov.rows())) throw std::invalid_argument("--indices out of range");
  CommandResult r;
  r.payload = {{"indices", idx}, {"moment", wick_moment(cov, idx)}};
  return r;
}

}  // namespace

std::vector<Command> process_commands() {
  return {
      {"process", "poisson", "Poisson counting path, optionally thinned",
       [](Params& p) {
         p.add("rate", "1", "Intensity");
         p.add("time", "10", "Horizon");
         p.optional("thin", "Keep probability for thinning");
       },
       poisson_cmd},
      {"process", "wiener", "Wiener ensemble with the 3 sqrt(t) envelope",
       [](Params& p) {
         p.add("paths", "10", "Number of paths");
         p.add("steps", "1000", "Grid intervals");
         p.add("time", "1", "Horizon");
         p.add("sigma", "1", "Diffusion coefficient");
       },
       wiener_cmd},
      {"process", "pedestrian", "Mean crossing time of a pedestrian waiting for a gap",
       [](Params& p) {
         p.add("lambda", "1", "Car intensity");
         p.add("a", "1", "Required gap");
         p.add("runs", "100000", "Monte Carlo runs");
       },
       pedestrian_cmd},
      {"process", "max-law", "Law of the running maximum of W",
       [](Params& p) {
         p.add("time", "1", "Horizon");
         p.add("x", "0.5,1,2", "Levels, comma separated");
         p.add("paths", "100000", "Paths");
         p.add("steps-per-unit", "10000", "Grid steps per unit time");
       },
       max_law_cmd},
      {"process", "dirichlet", "Random-walk solution of the Dirichlet problem on the unit square",
       [](Params& p) {
         p.add("function", "x2-y2", "Boundary data: x2-y2, xy, x, y, exp-cos");
         p.add("x", "0.3", "Point x");
         p.add("y", "0.6", "Point y");
         p.add("step", "0.02", "Lattice step h");
         p.add("walks", "100000", "Walks");
       },
       dirichlet_cmd},
      {"process", "wick", "Gaussian moment from a covariance matrix",
       [](Params& p) {
         p.add("cov", "", "Covariance matrix CSV");
         p.add("indices", "", "Coordinates, comma separated");
       },
       wick_cmd},
  };
}

}  // namespace stochlab::cli
