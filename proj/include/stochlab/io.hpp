#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "stochlab/decision.hpp"
#include "stochlab/markov_discrete.hpp"
#include "stochlab/pagerank.hpp"
#include "stochlab/spectral.hpp"

namespace stochlab::io {

using nlohmann::json;

/// Comma-separated numeric rows; blank lines and '#' comments are skipped.
/// Throws std::invalid_argument on ragged rows or non-numeric cells.
markov::Matrix read_matrix_csv(std::istream& in);
markov::Matrix read_matrix_csv(const std::string& path);
void write_matrix_csv(std::ostream& out, const markov::Matrix& m);

struct EdgeList {
  std::size_t nodes = 0;  ///< 1 + largest id seen
  std::vector<pagerank::Edge> edges;
};

/// Lines "src dst [weight]" with 0-based ids; '#' starts a comment.
EdgeList read_edge_list(std::istream& in);
EdgeList read_edge_list(const std::string& path);
void write_edge_list(std::ostream& out, const pagerank::WebGraph& g);

/// "tau,R" table with a header line.
spectral::CorrelationFunction read_correlation_csv(std::istream& in);
spectral::CorrelationFunction read_correlation_csv(const std::string& path);

/// {states, actions, gamma, transitions: [[s, a, s', prob, reward], ...]}
decision::MdpModel mdp_from_json(const json& j);
json mdp_to_json(const decision::MdpModel& m);

/// [{node, score}] sorted by descending score, ties by node id.
json ranking_json(const std::vector<double>& nu);

}  // namespace stochlab::io
