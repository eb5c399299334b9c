#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "langprop/errors.hpp"
#include "langprop/graph.hpp"
#include "langprop/labels.hpp"

namespace langprop {

struct MadConfig {
  double mu1 = 1.0;    // seed injection
  double mu2 = 0.01;   // neighbor agreement
  double mu3 = 0.01;   // abandonment / dummy regularization
  double beta = 2.0;
  int max_iters = 100;
  double tol = 1e-6;  // max absolute per-entry change between sweeps

  void validate() const;
};

struct NodeWalkProbs {
  double inj = 0.0;
  double cont = 0.0;
  double abnd = 0.0;
};

/// Symmetric weighted adjacency: adjacency[v] lists (u, w(v,u)).
using Adjacency = std::vector<std::vector<std::pair<std::uint32_t, double>>>;

/// Entropy-based walk probabilities per node. `seeded[v]` marks seed nodes.
/// Isolated nodes are an error.
std::vector<NodeWalkProbs> compute_walk_probs(const Adjacency& adjacency,
                                              const std::vector<char>& seeded,
                                              double beta);

struct MadResult {
  /// scores[v] has num_labels + 1 entries; the dummy label is last.
  std::vector<std::vector<double>> scores;
  std::size_t num_labels = 0;
  int iterations = 0;
  bool converged = false;
};

/// Modified Adsorption with synchronous (Jacobi) sweeps. `seeds[v]` is either
/// empty (unseeded) or a length-num_labels distribution. Requires at least one
/// seeded node.
MadResult propagate(const Adjacency& adjacency,
                    const std::vector<std::vector<double>>& seeds,
                    std::size_t num_labels, const MadConfig& cfg, int threads = 1);

/// Runs MAD over a social graph using its injected seeds and the six
/// production languages.
MadResult propagate(const SocialGraph& graph, const MadConfig& cfg, int threads = 1);

/// Drops the dummy entry and renormalizes the language scores to sum to one
/// (uniform if all six are zero). Accepts rows with or without the trailing
/// dummy score.
LabelDistribution renormalize_scores(const std::vector<double>& row);

/// TSV dump: node_kind, key, label:score pairs (languages then dummy), six
/// decimals.
void write_propagation(std::ostream& out, const SocialGraph& graph,
                       const MadResult& result);
void write_propagation_file(const std::string& path, const SocialGraph& graph,
                            const MadResult& result);

/// Reads a propagation dump back and returns renormalized distributions for
/// the tweet nodes only.
std::unordered_map<std::string, LabelDistribution> load_tweet_social(
    std::istream& in, std::string_view source = "<propagation>");
std::unordered_map<std::string, LabelDistribution> load_tweet_social_file(
    const std::string& path);

}  // namespace langprop
