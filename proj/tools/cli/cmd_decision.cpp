#include <cmath>
#include <fstream>

#include "commands.hpp"
#include "stochlab/decision.hpp"
#include "stochlab/io.hpp"

namespace stochlab::cli {
namespace {

using namespace stochlab::decision;

/// Accepts a bare model or the output document of `decision random-mdp`.
MdpModel load_mdp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  json j = json::parse(in);
  if (j.contains("result") && j["result"].contains("mdp")) j = j["result"]["mdp"];
  return io::mdp_from_json(j);
}

MdpModel mdp_source(const Params& p, const RandomSource& src) {
  if (p.has("mdp")) return load_mdp(p.str("mdp"));
  Rng rng = src.child(0).stream();
  return MdpModel::random(p.count("states"), p.count("actions"), p.real("gamma"), rng);
}

json q_json(const QValues& q) { return json(q); }

CommandResult value_iteration_cmd(const Params& p, const RandomSource&) {
  const auto m = load_mdp(p.str("mdp"));
  const auto v = value_iteration(m, p.real("tol"));
  CommandResult r;
  r.payload = {{"value", v.value}, {"policy", v.policy}, {"q", q_json(v.q)},
               {"iterations", v.iterations}, {"residual", v.residual}};
  r.table.header = {"state", "value", "action"};
  for (std::size_t s = 0; s < m.states; ++s) r.table.rows.push_back({s, v.value[s], v.policy[s]});
  return r;
}

CommandResult random_mdp_cmd(const Params& p, const RandomSource& src) {
  Rng rng = src.child(0).stream();
  const auto m = MdpModel::random(p.count("states"), p.count("actions"), p.real("gamma"), rng);
  CommandResult r;
  r.payload = {{"mdp", io::mdp_to_json(m)}};
  r.table.header = {"s", "a", "next", "prob", "reward"};
  for (const auto& t : r.payload["mdp"]["transitions"]) r.table.rows.push_back({t[0], t[1], t[2], t[3], t[4]});
  return r;
}

CommandResult secretary_cmd(const Params& p, const RandomSource& src) {
  const auto n = p.count("n");
  const auto s = secretary_solve(n);
  CommandResult r;
  r.payload = {{"n", n}, {"s_star", s.threshold}, {"v_star", s.success}, {"harmonic", s.harmonic}};
  if (p.count("trials") > 0) r.payload["simulated"] = secretary_simulate(n, s.threshold, p.count("trials"), src);
  Series v{"value", {}, {}};
  r.table.header = {"position", "value"};
  for (std::size_t k = 1; k <= n; ++k) {
    v.x.push_back(static_cast<double>(k));
    v.y.push_back(s.value[k]);
    r.table.rows.push_back({k, s.value[k]});
  }
  r.plot.series.push_back(std::move(v));
  return r;
}

CommandResult gittins_cmd(const Params& p, const RandomSource&) {
  const auto w = p.u64("w"), l = p.u64("l");
  CommandResult r;
  r.payload = {{"w", w}, {"l", l}, {"gamma", p.real("gamma")},
               {"index", gittins_index(w, l, p.real("gamma"), p.count("cap"))},
               {"posterior_mean", static_cast<double>(w + 1) / static_cast<double>(w + l + 2)}};
  return r;
}

StepSchedule schedule(const std::string& s) {
  if (s == "harmonic") return StepSchedule::Harmonic;
  if (s == "rescaled") return StepSchedule::Rescaled;
  if (s == "polynomial") return StepSchedule::Polynomial;
  throw std::invalid_argument("--schedule must be harmonic, rescaled or polynomial");
}

CommandResult qlearn_cmd(const Params& p, const RandomSource& src) {
  const auto m = mdp_source(p, src);
  QLearningOptions opt;
  opt.updates = p.count("updates");
  opt.epsilon = p.real("epsilon");
  opt.schedule = schedule(p.str("schedule"));
  opt.power = p.real("power");
  const auto q = q_learning(m, opt, src.child(1));
  const auto vi = value_iteration(m);
  CommandResult r;
  r.payload = {{"q", q_json(q.q)}, {"q_value_iteration", q_json(vi.q)}, {"sup_error", sup_distance(q.q, vi.q)},
               {"visits", q.visits}};
  r.table.header = {"state", "action", "q", "q_vi", "visits"};
  for (std::size_t s = 0; s < m.states; ++s)
    for (std::size_t a = 0; a < m.actions; ++a) r.table.rows.push_back({s, a, q.q[s][a], vi.q[s][a], q.visits[s][a]});
  return r;
}

CommandResult exp3_cmd(const Params& p, const RandomSource& src) {
  const auto arms = p.reals("arms");
  const auto rounds = p.count("rounds");
  Exp3Options opt;
  opt.eta = p.real("eta");
  opt.record_trace = true;
  if (p.str("estimator") == "gain")
    opt.estimator = Exp3Estimator::Gain;
  else if (p.str("estimator") != "loss")
    throw std::invalid_argument("--estimator must be loss or gain");
  const auto res = exp3(arms, rounds, src, opt);
  const double n = static_cast<double>(arms.size()), big_n = static_cast<double>(rounds);
  CommandResult r;
  r.payload = {{"eta", res.eta},
               {"reward", res.reward},
               {"regret", res.regret},
               {"regret_bound", 2.0 * std::sqrt(big_n * n * std::log(n))},
               {"estimates", res.estimates}};
  r.table.header = {"t", "arm", "reward", "cumreward"};
  Series cum{"cumreward", {}, {}};
  const std::size_t every = std::max<std::size_t>(1, rounds / 1000);
  double total = 0.0;
  for (std::size_t t = 0; t < res.arms.size(); ++t) {
    total += res.rewards[t];
    r.table.rows.push_back({t + 1, res.arms[t], res.rewards[t], total});
    if ((t + 1) % every == 0) {
      cum.x.push_back(static_cast<double>(t + 1));
      cum.y.push_back(total);
    }
  }
  r.plot.series.push_back(std::move(cum));
  return r;
}

CommandResult switch_cmd(const Params& p, const RandomSource& src) {
  const auto s = naive_switch_strategy(p.real("p1"), p.real("p2"), p.count("rounds"), src);
  CommandResult r;
  r.payload = {{"empirical", s.empirical}, {"closed_form", s.closed_form}, {"stationary_first", s.stationary_first}};
  return r;
}

void random_model_params(Params& p) {
  p.add("states", "4", "States of a random model");
  p.add("actions", "2", "Actions of a random model");
  p.add("gamma", "0.8", "Discount of a random model");
}

}  // namespace

std::vector<Command> decision_commands() {
  return {
      {"decision", "value-iteration", "Optimal values and policy of an MDP",
       [](Params& p) {
         p.add("mdp", "", "MDP JSON {states, actions, gamma, transitions}");
         p.add("tol", "1e-10", "Stopping tolerance");
       },
       value_iteration_cmd},
      {"decision", "random-mdp", "Random dense MDP in the JSON model format", random_model_params, random_mdp_cmd},
      {"decision", "secretary", "Optimal stopping for the best of n candidates",
       [](Params& p) {
         p.add("n", "1000", "Candidates");
         p.add("trials", "0", "Also simulate the optimal rule this many times");
       },
       secretary_cmd},
      {"decision", "gittins", "Gittins index of a Bernoulli arm with a Beta posterior",
       [](Params& p) {
         p.add("w", "0", "Observed successes");
         p.add("l", "0", "Observed failures");
         p.add("gamma", "0.9", "Discount");
         p.add("cap", "400", "Lattice depth");
       },
       gittins_cmd},
      {"decision", "qlearn", "Tabular Q-learning against value iteration",
       [](Params& p) {
         p.optional("mdp", "MDP JSON (default: a random model)");
         random_model_params(p);
         p.add("updates", "1000000", "Updates");
         p.add("epsilon", "0.1", "Exploration rate");
         p.add("schedule", "rescaled", "harmonic, rescaled or polynomial");
         p.add("power", "0.7", "Exponent of the polynomial schedule");
       },
       qlearn_cmd},
      {"decision", "exp3", "Exp3 on Bernoulli arms",
       [](Params& p) {
         p.add("arms", "0.5,0.6", "Success probabilities, comma separated");
         p.add("rounds", "100000", "Rounds");
         p.add("eta", "0", "Learning rate, 0 for automatic");
         p.add("estimator", "loss", "Reward estimate: loss or gain");
       },
       exp3_cmd},
      {"decision", "switch", "Win-stay lose-shift on two arms",
       [](Params& p) {
         p.add("p1", "0.3", "Arm 1 success probability");
         p.add("p2", "0.6", "Arm 2 success probability");
         p.add("rounds", "1000000", "Rounds");
       },
       switch_cmd},
  };
}

}  // namespace stochlab::cli
