#include <cmath>

#include "commands.hpp"
#include "stochlab/io.hpp"
#include "stochlab/markov_discrete.hpp"

namespace stochlab::cli {
namespace {

using namespace stochlab::markov;

StochasticMatrix load(const Params& p) { return StochasticMatrix(io::read_matrix_csv(p.str("matrix"))); }

std::vector<double> as_vector(const DistributionVector& d) {
  return std::vector<double>(d.values().data(), d.values().data() + d.values().size());
}

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

Table matrix_table(const Matrix& m) {
  Table t;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    std::vector<json> row;
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.emplace_back(m(i, j));
    t.rows.push_back(row);
  }
  return t;
}

DistributionVector initial(const Params& p, std::size_t n) {
  if (p.has("initial")) {
    const auto v = p.reals("initial");
    if (v.size() != n) throw std::invalid_argument("--initial must have one entry per state");
    return DistributionVector(Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size())));
  }
  const auto s = p.count("start");
  if (s >= n) throw std::invalid_argument("--start is not a state");
  return DistributionVector::point_mass(n, s);
}

void matrix_param(Params& p) { p.add("matrix", "", "Transition matrix CSV (rows sum to 1)"); }

CommandResult stationary_cmd(const Params& p, const RandomSource&) {
  const auto m = load(p);
  const auto cls = classify(m);
  const auto st = stationary(m);
  CommandResult r;
  json per = json::array(), classes = json::array();
  for (std::size_t k = 0; k < st.per_class.size(); ++k) {
    per.push_back(as_vector(st.per_class[k]));
    classes.push_back(cls.classes[st.class_ids[k]]);
  }
  r.payload["closed_classes"] = classes;
  r.payload["stationary"] = per;
  r.payload["unique"] = st.per_class.size() == 1;
  if (st.per_class.size() == 1) {
    r.payload["pi"] = as_vector(st.per_class[0]);
    r.payload["entropy_rate_bits"] = entropy_rate(m, st.per_class[0]);
  }
  r.table.header = {"state"};
  for (std::size_t k = 0; k < st.per_class.size(); ++k) r.table.header.push_back("pi_" + std::to_string(k));
  for (std::size_t i = 0; i < m.size(); ++i) {
    std::vector<json> row{i};
    for (const auto& d : st.per_class) row.emplace_back(d[i]);
    r.table.rows.push_back(row);
  }
  return r;
}

CommandResult classify_cmd(const Params& p, const RandomSource&) {
  const auto m = load(p);
  const auto c = classify(m);
  CommandResult r;
  json classes = json::array();
  r.table.header = {"class", "closed", "period", "states"};
  for (std::size_t k = 0; k < c.classes.size(); ++k) {
    classes.push_back({{"states", c.classes[k]}, {"closed", bool(c.closed[k])}, {"period", c.period[k]}});
    std::string states;
    for (auto s : c.classes[k]) states += (states.empty() ? "" : " ") + std::to_string(s);
    r.table.rows.push_back({k, bool(c.closed[k]), c.period[k], states});
  }
  std::vector<bool> essential(c.essential.begin(), c.essential.end());
  r.payload["classes"] = classes;
  r.payload["essential"] = essential;
  r.payload["irreducible"] = c.irreducible();
  return r;
}

CommandResult evolve_cmd(const Params& p, const RandomSource&) {
  const auto m = load(p);
  const auto p0 = initial(p, m.size());
  const auto steps = p.count("steps");
  CommandResult r;
  r.plot.series.resize(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) r.plot.series[i].name = "state" + std::to_string(i);
  DistributionVector cur = p0;
  for (std::size_t n = 0;; ++n) {
    for (std::size_t i = 0; i < m.size(); ++i) {
      r.plot.series[i].x.push_back(static_cast<double>(n));
      r.plot.series[i].y.push_back(cur[i]);
    }
    if (n == steps) break;
    cur = evolve(m, cur, 1);
  }
  r.payload["steps"] = steps;
  r.payload["distribution"] = as_vector(cur);
  r.table.header = {"state", "probability"};
  for (std::size_t i = 0; i < m.size(); ++i) r.table.rows.push_back({i, cur[i]});
  return r;
}

CommandResult gap_cmd(const Params& p, const RandomSource&) {
  const auto g = spectral_gap(load(p));
  CommandResult r;
  json ev = json::array();
  r.table.header = {"re", "im", "modulus"};
  for (const auto& z : g.eigenvalues) {
    ev.push_back({z.real(), z.imag()});
    r.table.rows.push_back({z.real(), z.imag(), std::abs(z)});
  }
  r.payload = {{"gap", g.gap}, {"ergodic", g.ergodic}, {"eigenvalues", ev}};
  return r;
}

CommandResult doeblin_cmd(const Params& p, const RandomSource&) {
  const auto m = load(p);
  const auto d = doeblin_bound(m);
  const auto horizon = p.count("horizon");
  CommandResult r;
  r.payload = {{"n0", d.n0}, {"delta", d.delta}, {"column", d.column}};
  Series s{"bound", {}, {}};
  r.table.header = {"n", "bound"};
  for (std::size_t n = 0; n <= horizon; ++n) {
    s.x.push_back(static_cast<double>(n));
    s.y.push_back(d.bound(n));
    r.table.rows.push_back({n, d.bound(n)});
  }
  r.plot.series.push_back(std::move(s));
  return r;
}

CommandResult hitting_cmd(const Params& p, const RandomSource&) {
  const auto h = hitting_times(load(p));
  CommandResult r;
  std::vector<double> ret(h.return_times.data(), h.return_times.data() + h.return_times.size());
  r.payload = {{"mean_hitting", matrix_json(h.mean_hitting)}, {"return_times", ret}};
  r.table = matrix_table(h.mean_hitting);
  return r;
}

CommandResult simulate_cmd(const Params& p, const RandomSource& src) {
  const auto m = load(p);
  const auto start = p.count("start");
  if (start >= m.size()) throw std::invalid_argument("--start is not a state");
  Rng rng = src.stream();
  const auto occ = simulate_occupation(m, start, p.count("steps"), rng);
  CommandResult r;
  std::vector<double> f(occ.frequencies.data(), occ.frequencies.data() + occ.frequencies.size());
  r.payload = {{"frequencies", f}, {"empirical_entropy_rate_bits", occ.empirical_entropy_rate()}, {"steps", occ.steps}};
  const auto st = stationary(m);
  if (st.per_class.size() == 1) r.payload["pi"] = as_vector(st.per_class[0]);
  r.table.header = {"state", "frequency"};
  for (std::size_t i = 0; i < f.size(); ++i) r.table.rows.push_back({i, f[i]});
  return r;
}

CommandResult ehrenfest_cmd(const Params& p, const RandomSource&) {
  const auto n = p.count("particles");
  const auto m = ehrenfest_discrete(n);
  const auto st = stationary(m);
  const auto h = hitting_times(m);
  CommandResult r;
  r.payload = {{"matrix", matrix_json(m.matrix())},
               {"stationary", as_vector(st.per_class.at(0))},
               {"return_time_0", h.return_times(0)}};
  // the CSV view is the matrix itself so it loads back with --matrix
  r.table = matrix_table(m.matrix());
  return r;
}

}  // namespace

std::vector<Command> markov_commands() {
  return {
      {"markov", "stationary", "Stationary distributions, one per closed class", matrix_param, stationary_cmd},
      {"markov", "classify", "Communicating classes, closedness and periods", matrix_param, classify_cmd},
      {"markov", "evolve", "Distribution after n steps",
       [](Params& p) {
         matrix_param(p);
         p.add("steps", "1", "Number of steps");
         p.add("start", "0", "Initial state (point mass)");
         p.optional("initial", "Initial distribution, comma separated");
       },
       evolve_cmd},
      {"markov", "gap", "Spectral gap and eigenvalues", matrix_param, gap_cmd},
      {"markov", "doeblin", "Doeblin minorization and the convergence bound",
       [](Params& p) {
         matrix_param(p);
         p.add("horizon", "64", "Largest n for the bound table");
       },
       doeblin_cmd},
      {"markov", "hitting", "Mean hitting and return times", matrix_param, hitting_cmd},
      {"markov", "simulate", "Occupation frequencies of one simulated path",
       [](Params& p) {
         matrix_param(p);
         p.add("start", "0", "Initial state");
         p.add("steps", "100000", "Path length");
       },
       simulate_cmd},
      {"markov", "ehrenfest", "Discrete Ehrenfest urn chain",
       [](Params& p) { p.add("particles", "4", "Number of particles"); }, ehrenfest_cmd},
  };
}

}  // namespace stochlab::cli
