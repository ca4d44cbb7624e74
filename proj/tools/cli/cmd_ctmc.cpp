#include <cmath>

#include "commands.hpp"
#include "stochlab/io.hpp"
#include "stochlab/markov_continuous.hpp"

namespace stochlab::cli {
namespace {

using namespace stochlab::ctmc;

GeneratorMatrix load(const Params& p) { return GeneratorMatrix(io::read_matrix_csv(p.str("generator"))); }

std::vector<double> as_vector(const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

void generator_param(Params& p) { p.add("generator", "", "Generator matrix CSV (rows sum to 0)"); }

CommandResult transient_cmd(const Params& p, const RandomSource&) {
  const auto g = load(p);
  const double t = p.real("time");
  CommandResult r;
  if (p.has("start")) {
    const auto s = p.count("start");
    if (s >= g.size()) throw std::invalid_argument("--start is not a state");
    const auto d = solve_distribution(g, DistributionVector::point_mass(g.size(), s), t);
    r.payload = {{"time", t}, {"distribution", as_vector(d.values())}};
    r.table.header = {"state", "probability"};
    for (std::size_t i = 0; i < g.size(); ++i) r.table.rows.push_back({i, d[i]});
    return r;
  }
  const auto pt = transition_matrix(g, t);
  json rows = json::array();
  for (std::size_t i = 0; i < g.size(); ++i) {
    std::vector<double> row(g.size());
    std::vector<json> cells;
    for (std::size_t j = 0; j < g.size(); ++j) cells.emplace_back(row[j] = pt(i, j));
    rows.push_back(row);
    r.table.rows.push_back(cells);
  }
  r.payload = {{"time", t}, {"transition_matrix", rows}};
  return r;
}

CommandResult stationary_cmd(const Params& p, const RandomSource&) {
  const auto g = load(p);
  const auto st = stationary_ctmc(g);
  CommandResult r;
  json per = json::array();
  for (const auto& d : st.per_class) per.push_back(as_vector(d.values()));
  r.payload["stationary"] = per;
  if (st.per_class.size() == 1) {
    r.payload["pi"] = as_vector(st.per_class[0].values());
    std::vector<double> ret(g.size());
    for (std::size_t i = 0; i < g.size(); ++i)
      ret[i] = st.per_class[0][i] > 0.0 && g.rate(i) > 0.0 ? mean_return_time_ctmc(g, st.per_class[0], i)
                                                           : std::numeric_limits<double>::infinity();
    r.payload["mean_return_time"] = ret;
  }
  r.table.header = {"state"};
  for (std::size_t k = 0; k < st.per_class.size(); ++k) r.table.header.push_back("pi_" + std::to_string(k));
  for (std::size_t i = 0; i < g.size(); ++i) {
    std::vector<json> row{i};
    for (const auto& d : st.per_class) row.emplace_back(d[i]);
    r.table.rows.push_back(row);
  }
  return r;
}

CommandResult simulate_cmd(const Params& p, const RandomSource& src) {
  const auto g = load(p);
  const auto start = p.count("start");
  if (start >= g.size()) throw std::invalid_argument("--start is not a state");
  const double t = p.real("time");
  Rng rng = src.stream();
  const auto path = simulate_ctmc(g, start, t, rng);
  CommandResult r;
  r.payload = {{"times", path.times},
               {"states", path.values},
               {"t_end", path.t_end},
               {"occupation", as_vector(occupation_fractions(path, g.size()))}};
  r.table.header = {"t", "state"};
  Series s{"state", {}, {}};
  for (std::size_t k = 0; k < path.size(); ++k) {
    r.table.rows.push_back({path.times[k], path.values[k]});
    // staircase for plotting
    if (k > 0) {
      s.x.push_back(path.times[k]);
      s.y.push_back(path.values[k - 1]);
    }
    s.x.push_back(path.times[k]);
    s.y.push_back(path.values[k]);
  }
  s.x.push_back(path.t_end);
  s.y.push_back(path.values.back());
  r.plot.series.push_back(std::move(s));
  return r;
}

CommandResult queue_cmd(const Params& p, const RandomSource&) {
  const auto servers = p.count("servers");
  const auto q = mmN_queue(p.real("lambda"), p.real("mu"), servers);
  CommandResult r;
  r.payload = {{"stationary", as_vector(q.stationary.values())},
               {"mean_busy", q.mean_busy},
               {"loss_probability", q.stationary[servers]}};
  if (p.has("reward") || p.has("cost")) {
    const double a = p.has("reward") ? p.real("reward") : 0.0, b = p.has("cost") ? p.real("cost") : 0.0;
    r.payload["profit"] = queue_profit(q, servers, a, b);
  }
  r.table.header = {"busy", "probability"};
  for (std::size_t j = 0; j <= servers; ++j) r.table.rows.push_back({j, q.stationary[j]});
  return r;
}

CommandResult bus_stop_cmd(const Params& p, const RandomSource&) {
  const double lambda = p.real("lambda"), mu = p.real("mu");
  const auto cap = p.count("cap");
  const auto law = bus_stop_queue(lambda, mu);
  const auto st = stationary_ctmc(bus_stop_generator(lambda, mu, cap));
  const auto& trunc = st.per_class.at(0);
  CommandResult r;
  std::vector<double> geo(cap + 1);
  double max_err = 0.0;
  r.table.header = {"j", "geometric", "truncated"};
  Series a{"geometric", {}, {}}, b{"truncated", {}, {}};
  for (std::size_t j = 0; j <= cap; ++j) {
    geo[j] = law.pmf(j);
    max_err = std::max(max_err, std::fabs(geo[j] - trunc[j]));
    r.table.rows.push_back({j, geo[j], trunc[j]});
    a.x.push_back(static_cast<double>(j));
    a.y.push_back(geo[j]);
    b.x.push_back(static_cast<double>(j));
    b.y.push_back(trunc[j]);
  }
  r.plot.series = {a, b};
  r.payload = {{"ratio", law.p},
               {"mean", law.mean()},
               {"geometric", geo},
               {"truncated", as_vector(trunc.values())},
               {"max_abs_difference", max_err}};
  return r;
}

CommandResult ehrenfest_cmd(const Params& p, const RandomSource&) {
  const auto m = ehrenfest_model(p.count("particles"), p.real("rate"));
  CommandResult r;
  r.payload = {{"stationary", as_vector(m.stationary.values())},
               {"return_time_discrete", m.return_time_discrete},
               {"return_time_continuous", m.return_time_continuous}};
  r.table.header = {"state", "probability"};
  for (std::size_t i = 0; i < m.stationary.size(); ++i) r.table.rows.push_back({i, m.stationary[i]});
  return r;
}

}  // namespace

std::vector<Command> ctmc_commands() {
  return {
      {"ctmc", "transient", "P(t) = exp(t Lambda), or the distribution at t from --start",
       [](Params& p) {
         generator_param(p);
         p.add("time", "1", "Time t >= 0");
         p.optional("start", "Initial state");
       },
       transient_cmd},
      {"ctmc", "stationary", "Solutions of Lambda^T pi = 0", generator_param, stationary_cmd},
      {"ctmc", "simulate", "Gillespie path",
       [](Params& p) {
         generator_param(p);
         p.add("start", "0", "Initial state");
         p.add("time", "10", "Horizon");
       },
       simulate_cmd},
      {"ctmc", "queue", "N-server loss system",
       [](Params& p) {
         p.add("lambda", "1", "Arrival rate");
         p.add("mu", "1", "Service rate");
         p.add("servers", "2", "Number of servers");
         p.optional("reward", "Income per busy server");
         p.optional("cost", "Cost per server");
       },
       queue_cmd},
      {"ctmc", "bus-stop", "Bus-stop queue: geometric law against a truncated chain",
       [](Params& p) {
         p.add("lambda", "1", "Passenger arrival rate");
         p.add("mu", "1", "Bus arrival rate");
         p.add("cap", "60", "Truncation level");
       },
       bus_stop_cmd},
      {"ctmc", "ehrenfest", "Continuous-time Ehrenfest model",
       [](Params& p) {
         p.add("particles", "4", "Number of particles");
         p.add("rate", "1", "Jump rate per particle");
       },
       ehrenfest_cmd},
  };
}

}  // namespace stochlab::cli
