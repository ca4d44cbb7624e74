#include <cmath>
#include <fstream>

#include "commands.hpp"
#include "stochlab/io.hpp"
#include "stochlab/pagerank.hpp"

namespace stochlab::cli {
namespace {

using namespace stochlab::pagerank;

WebGraph load(const Params& p) {
  const auto el = io::read_edge_list(p.str("graph"));
  if (el.nodes == 0) throw std::invalid_argument("graph has no edges");
  return WebGraph(el.nodes, el.edges);
}

CommandResult ranked(const PageRankResult& res, const WebGraph& g) {
  CommandResult r;
  r.payload = {{"method", res.method},
               {"iterations", res.iterations},
               {"residual", res.residual},
               {"nodes", g.size()},
               {"patched_dangling", g.patched_dangling()},
               {"nu", res.nu},
               {"ranking", io::ranking_json(res.nu)}};
  r.table.header = {"node", "score"};
  for (const auto& e : r.payload["ranking"]) r.table.rows.push_back({e["node"], e["score"]});
  return r;
}

void graph_params(Params& p) {
  p.add("graph", "", "Edge list: 'src dst [weight]' per line");
  p.add("delta", "0.15", "Teleport probability");
}

CommandResult power_cmd(const Params& p, const RandomSource&) {
  const auto g = load(p);
  return ranked(power_iteration(g, p.real("delta"), p.real("eps"), p.count("max-iter")), g);
}

CommandResult cesaro_cmd(const Params& p, const RandomSource&) {
  const auto g = load(p);
  std::vector<double> start;
  if (p.has("start")) {
    const auto s = p.count("start");
    if (s >= g.size()) throw std::invalid_argument("--start is not a node");
    start.assign(g.size(), 0.0);
    start[s] = 1.0;
  }
  return ranked(cesaro_pagerank(g, p.count("horizon"), start, p.real("delta")), g);
}

CommandResult mcmc_cmd(const Params& p, const RandomSource& src) {
  const auto g = load(p);
  const double delta = p.real("delta");
  McmcOptions opt;
  opt.walkers = p.count("walkers");
  opt.steps = p.count("steps");
  opt.epsilon = p.real("epsilon");
  opt.sigma = p.real("sigma");
  const auto res = mcmc_pagerank(g, delta, opt, src);
  auto r = ranked(res.estimate, g);
  const auto exact = power_iteration(g, delta);
  r.payload["steps"] = res.steps;
  r.payload["bound"] = res.bound;
  r.payload["l2_to_power_iteration"] = l2_distance(res.estimate.nu, exact.nu);
  return r;
}

CommandResult poll_cmd(const Params& p, const RandomSource&) {
  CommandResult r;
  r.payload = {{"n", bernoulli_poll_size(p.real("eps"), p.real("sigma")) }};
  return r;
}

json fit_json(const std::vector<double>& hist) {
  try {
    const auto f = powerlaw_fit(hist);
    return {{"exponent", f.exponent}, {"bins", f.bins}};
  } catch (const std::domain_error& e) {
    return {{"exponent", nullptr}, {"error", e.what()}};
  }
}

CommandResult generate_cmd(const Params& p, const RandomSource& src) {
  const auto n = p.count("n");
  const double a = p.real("a");
  const auto m = p.count("m");
  const auto model = buckley_osthus_generate(n, a, m, src);
  const auto hist = degree_histogram(model.indegree);
  const auto law = mean_field_degree_law(a, hist.size() - 1);

  CommandResult r;
  r.payload = {{"pages", n}, {"a", a}, {"predicted_exponent", 2.0 + a}, {"fit", fit_json(hist)},
               {"sites", model.sites.size()}, {"site_links", model.sites.link_count()}};
  try {
    const auto rf = rank_law_fit(model.indegree);
    r.payload["rank_exponent"] = rf.exponent;
  } catch (const std::domain_error&) {
    r.payload["rank_exponent"] = nullptr;
  }
  r.table.header = {"k", "count", "fit"};
  Series cnt{"count", {}, {}}, fit{"fit", {}, {}};
  for (std::size_t k = 0; k < hist.size(); ++k) {
    if (hist[k] == 0.0) continue;
    const double expected = law[k] * static_cast<double>(n);
    r.table.rows.push_back({k, hist[k], expected});
    cnt.x.push_back(static_cast<double>(k));
    cnt.y.push_back(hist[k]);
    fit.x.push_back(static_cast<double>(k));
    fit.y.push_back(expected);
  }
  r.plot.series = {cnt, fit};

  if (p.has("edges-out")) {
    std::vector<Edge> edges;
    edges.reserve(n);
    for (std::size_t t = 0; t < n; ++t) edges.push_back({t, model.target[t], 1.0});
    std::ofstream f(p.str("edges-out"));
    if (!f) throw std::runtime_error("cannot write " + p.str("edges-out"));
    io::write_edge_list(f, WebGraph(n, edges));
  }
  return r;
}

CommandResult fit_cmd(const Params& p, const RandomSource&) {
  const auto el = io::read_edge_list(p.str("graph"));
  std::vector<std::size_t> indeg(el.nodes, 0);
  for (const auto& e : el.edges) ++indeg[e.dst];
  const auto hist = degree_histogram(indeg);
  CommandResult r;
  r.payload = {{"nodes", el.nodes}, {"edges", el.edges.size()}, {"fit", fit_json(hist)}};
  r.table.header = {"k", "count"};
  for (std::size_t k = 0; k < hist.size(); ++k)
    if (hist[k] > 0.0) r.table.rows.push_back({k, hist[k]});
  return r;
}

}  // namespace

std::vector<Command> pagerank_commands() {
  return {
      {"pagerank", "power", "PageRank by power iteration",
       [](Params& p) {
         graph_params(p);
         p.add("eps", "1e-12", "Stop when successive iterates differ by this much in l1");
         p.add("max-iter", "100000", "Iteration cap");
       },
       power_cmd},
      {"pagerank", "cesaro", "Running mean of the iterates",
       [](Params& p) {
         p.add("graph", "", "Edge list: 'src dst [weight]' per line");
         p.add("delta", "0", "Teleport probability");
         p.add("horizon", "1000", "Averaging horizon T");
         p.optional("start", "Start node (default: uniform)");
       },
       cesaro_cmd},
      {"pagerank", "mcmc", "Random-walk estimate of PageRank",
       [](Params& p) {
         graph_params(p);
         p.add("walkers", "100000", "Independent walkers");
         p.add("steps", "0", "Walk length, 0 for automatic");
         p.add("epsilon", "0.001", "Target mixing accuracy for the automatic length");
         p.add("sigma", "0.01", "Confidence level of the error bound");
       },
       mcmc_cmd},
      {"pagerank", "poll", "Sample size for estimating a proportion",
       [](Params& p) {
         p.add("eps", "0.05", "Accuracy");
         p.add("sigma", "0.05", "Failure probability");
       },
       poll_cmd},
      {"pagerank", "generate", "Preferential-attachment web graph and its in-degree law",
       [](Params& p) {
         p.add("n", "100000", "Pages");
         p.add("a", "1", "Attractiveness");
         p.add("m", "1", "Pages per site");
         p.optional("edges-out", "Write the page graph as an edge list");
       },
       generate_cmd},
      {"pagerank", "fit", "Power-law exponent of the in-degree law of a graph",
       [](Params& p) { p.add("graph", "", "Edge list"); }, fit_cmd},
  };
}

}  // namespace stochlab::cli
