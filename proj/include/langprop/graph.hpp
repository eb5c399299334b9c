#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "langprop/corpus.hpp"
#include "langprop/knn.hpp"
#include "langprop/labels.hpp"

namespace langprop {

enum class NodeKind : std::uint8_t { Tweet, User, World };

std::string_view to_string(NodeKind kind);
std::optional<NodeKind> node_kind_from_string(std::string_view text);

struct NodeRef {
  NodeKind kind;
  std::string key;  // tweet id or user id; empty for the world node

  bool operator==(const NodeRef&) const = default;
};

struct GraphConfig {
  double tweet_user_weight = 100.0;
  double user_user_weight = 1.0;
  double user_world_weight = 0.001;

  void validate() const;
};

/// Undirected weighted graph over tweet, user and world nodes, with seed
/// label distributions on training tweets. Connected through the world node
/// by construction.
class SocialGraph {
 public:
  using NodeIndex = std::uint32_t;

  struct Edge {
    NodeIndex a, b;  // a < b
    double weight;

    bool operator==(const Edge&) const = default;
  };

  /// Assembles the topology: one node per tweet, per user (authors and
  /// follow endpoints) and one world node. Tweet-tweet edges take the
  /// cosine weight of any pair either side selected (union symmetrization);
  /// each tweet links to its author, follow pairs link users, every user
  /// links to the world.
  static SocialGraph build(const Dataset& data, const NeighborLists& neighbors,
                           const GraphConfig& cfg = {});

  /// Attaches seed_distribution(gold) to every labeled tweet in
  /// train_tweets. Unknown tweet ids are an error.
  void inject_seeds(const std::vector<Tweet>& train_tweets);

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  const NodeRef& node(NodeIndex index) const { return nodes_[index]; }
  const std::vector<NodeRef>& nodes() const { return nodes_; }
  std::optional<NodeIndex> find(NodeKind kind, std::string_view key) const;
  NodeIndex world() const { return world_; }

  const std::vector<Edge>& edges() const { return edges_; }
  /// Symmetric adjacency, entries in edge insertion order.
  const std::vector<std::vector<std::pair<NodeIndex, double>>>& adjacency() const {
    return adjacency_;
  }
  /// Seeded nodes in index order.
  const std::map<NodeIndex, LabelDistribution>& seeds() const { return seeds_; }

  /// Sectioned text format: #nodes (kind TAB key), #edges (kindA TAB keyA
  /// TAB kindB TAB keyB TAB weight, 9 significant digits), #seeds (tweet_id
  /// TAB lang:prob,...).
  void save(std::ostream& out) const;
  static SocialGraph load(std::istream& in, std::string_view source = "graph");
  void save_file(const std::string& path) const;
  static SocialGraph load_file(const std::string& path);

 private:
  NodeIndex add_node(NodeKind kind, std::string key);
  void add_edge(NodeIndex a, NodeIndex b, double weight);

  std::vector<NodeRef> nodes_;
  std::unordered_map<std::string, NodeIndex> tweet_index_;
  std::unordered_map<std::string, NodeIndex> user_index_;
  NodeIndex world_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::pair<NodeIndex, double>>> adjacency_;
  std::map<NodeIndex, LabelDistribution> seeds_;
};

}  // namespace langprop
