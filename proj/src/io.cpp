#include "stochlab/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace stochlab::io {
namespace {

std::ifstream open(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  return in;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& cell, std::size_t line) {
  const std::string t = trim(cell);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size())
    throw std::invalid_argument("line " + std::to_string(line) + ": not a number: '" + t + "'");
  return v;
}

std::size_t parse_index(const std::string& tok, std::size_t line) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size())
    throw std::invalid_argument("line " + std::to_string(line) + ": bad node id '" + tok + "'");
  return v;
}

std::string strip_comment(const std::string& s) {
  const auto h = s.find('#');
  return trim(h == std::string::npos ? s : s.substr(0, h));
}

}  // namespace

markov::Matrix read_matrix_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t no = 0;
  while (std::getline(in, line)) {
    ++no;
    line = strip_comment(line);
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(parse_double(cell, no));
    if (!rows.empty() && row.size() != rows.front().size())
      throw std::invalid_argument("line " + std::to_string(no) + ": row length differs");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::invalid_argument("matrix file is empty");
  markov::Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return m;
}

markov::Matrix read_matrix_csv(const std::string& path) {
  auto in = open(path);
  return read_matrix_csv(in);
}

void write_matrix_csv(std::ostream& out, const markov::Matrix& m) {
  out.precision(std::numeric_limits<double>::max_digits10);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) out << (j ? "," : "") << m(i, j);
    out << '\n';
  }
}

EdgeList read_edge_list(std::istream& in) {
  EdgeList el;
  std::string line;
  std::size_t no = 0;
  while (std::getline(in, line)) {
    ++no;
    line = strip_comment(line);
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string a, b, w, extra;
    ss >> a >> b;
    if (b.empty()) throw std::invalid_argument("line " + std::to_string(no) + ": expected 'src dst [weight]'");
    pagerank::Edge e{parse_index(a, no), parse_index(b, no), 1.0};
    if (ss >> w) e.weight = parse_double(w, no);
    if (ss >> extra) throw std::invalid_argument("line " + std::to_string(no) + ": trailing fields");
    el.nodes = std::max({el.nodes, e.src + 1, e.dst + 1});
    el.edges.push_back(e);
  }
  return el;
}

EdgeList read_edge_list(const std::string& path) {
  auto in = open(path);
  return read_edge_list(in);
}

void write_edge_list(std::ostream& out, const pagerank::WebGraph& g) {
  out.precision(std::numeric_limits<double>::max_digits10);
  out << "# nodes " << g.size() << '\n';
  for (std::size_t i = 0; i < g.size(); ++i)
    for (const auto& l : g.out(i)) out << i << ' ' << l.node << ' ' << l.prob << '\n';
}

spectral::CorrelationFunction read_correlation_csv(std::istream& in) {
  std::string line;
  std::size_t no = 0;
  std::vector<double> taus, values;
  bool header = false;
  while (std::getline(in, line)) {
    ++no;
    line = strip_comment(line);
    if (line.empty()) continue;
    if (!header) {
      std::string h = line;
      h.erase(std::remove(h.begin(), h.end(), ' '), h.end());
      if (h != "tau,R") throw std::invalid_argument("correlation file must start with a 'tau,R' header");
      header = true;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw std::invalid_argument("line " + std::to_string(no) + ": expected 'tau,R'");
    taus.push_back(parse_double(line.substr(0, comma), no));
    values.push_back(parse_double(line.substr(comma + 1), no));
  }
  return spectral::CorrelationFunction::sampled(std::move(taus), std::move(values));
}

spectral::CorrelationFunction read_correlation_csv(const std::string& path) {
  auto in = open(path);
  return read_correlation_csv(in);
}

decision::MdpModel mdp_from_json(const json& j) {
  decision::MdpModel m;
  try {
    m.states = j.at("states").get<std::size_t>();
    m.actions = j.at("actions").get<std::size_t>();
    m.gamma = j.at("gamma").get<double>();
    m.kernel.assign(m.states, std::vector<std::vector<decision::Transition>>(m.actions));
    for (const auto& t : j.at("transitions")) {
      if (!t.is_array() || t.size() < 4 || t.size() > 5)
        throw std::invalid_argument("MDP transition must be [s, a, s', prob, reward]");
      const auto s = t[0].get<std::size_t>(), a = t[1].get<std::size_t>();
      if (s >= m.states || a >= m.actions) throw std::invalid_argument("MDP transition refers to an unknown state or action");
      m.kernel[s][a].push_back({t[2].get<std::size_t>(), t[3].get<double>(), t.size() == 5 ? t[4].get<double>() : 0.0});
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("MDP JSON: ") + e.what());
  }
  m.validate();
  return m;
}

json mdp_to_json(const decision::MdpModel& m) {
  json tr = json::array();
  for (std::size_t s = 0; s < m.states; ++s)
    for (std::size_t a = 0; a < m.actions; ++a) {
      const double base = m.action_reward.empty() ? 0.0 : m.action_reward[s][a];
      for (const auto& t : m.kernel[s][a]) tr.push_back({s, a, t.next, t.prob, t.reward + base});
    }
  return {{"states", m.states}, {"actions", m.actions}, {"gamma", m.gamma}, {"transitions", tr}};
}

json ranking_json(const std::vector<double>& nu) {
  std::vector<std::size_t> order(nu.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return nu[a] > nu[b]; });
  json out = json::array();
  for (std::size_t i : order) out.push_back({{"node", i}, {"score", nu[i]}});
  return out;
}

}  // namespace stochlab::io
