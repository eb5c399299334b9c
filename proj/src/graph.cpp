#include "langprop/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>

namespace langprop {

std::string_view to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::Tweet:
      return "tweet";
    case NodeKind::User:
      return "user";
    case NodeKind::World:
      return "world";
  }
  return "";
}

std::optional<NodeKind> node_kind_from_string(std::string_view text) {
  if (text == "tweet") return NodeKind::Tweet;
  if (text == "user") return NodeKind::User;
  if (text == "world") return NodeKind::World;
  return std::nullopt;
}

void GraphConfig::validate() const {
  if (tweet_user_weight <= 0.0 || user_user_weight <= 0.0 || user_world_weight <= 0.0) {
    throw ValidationError("graph edge weights must be positive");
  }
}

SocialGraph::NodeIndex SocialGraph::add_node(NodeKind kind, std::string key) {
  const auto index = static_cast<NodeIndex>(nodes_.size());
  if (kind == NodeKind::Tweet) {
    tweet_index_.emplace(key, index);
  } else if (kind == NodeKind::User) {
    user_index_.emplace(key, index);
  }
  nodes_.push_back({kind, std::move(key)});
  adjacency_.emplace_back();
  return index;
}

void SocialGraph::add_edge(NodeIndex a, NodeIndex b, double weight) {
  if (a == b) throw ValidationError("self-loop edge");
  if (!(weight > 0.0)) throw ValidationError("edge weight must be positive");
  if (b < a) std::swap(a, b);
  edges_.push_back({a, b, weight});
  adjacency_[a].emplace_back(b, weight);
  adjacency_[b].emplace_back(a, weight);
}

std::optional<SocialGraph::NodeIndex> SocialGraph::find(NodeKind kind,
                                                        std::string_view key) const {
  if (kind == NodeKind::World) return world_;
  const auto& index = kind == NodeKind::Tweet ? tweet_index_ : user_index_;
  auto it = index.find(std::string(key));
  if (it == index.end()) return std::nullopt;
  return it->second;
}

SocialGraph SocialGraph::build(const Dataset& data, const NeighborLists& neighbors,
                               const GraphConfig& cfg) {
  cfg.validate();
  if (neighbors.size() != data.tweets.size()) {
    throw ValidationError("neighbor lists must cover every tweet");
  }

  SocialGraph g;
  for (const Tweet& tweet : data.tweets) {
    if (g.tweet_index_.contains(tweet.id)) {
      throw ValidationError("duplicate tweet id '" + tweet.id + "'");
    }
    g.add_node(NodeKind::Tweet, tweet.id);
  }
  // Users in first-seen order: tweet authors, then follow endpoints.
  for (const Tweet& tweet : data.tweets) {
    if (!g.user_index_.contains(tweet.author)) g.add_node(NodeKind::User, tweet.author);
  }
  for (const auto& [a, b] : data.follows) {
    if (a == b) throw ValidationError("self-loop follow pair '" + a + "'");
    if (!g.user_index_.contains(a)) g.add_node(NodeKind::User, a);
    if (!g.user_index_.contains(b)) g.add_node(NodeKind::User, b);
  }
  g.world_ = g.add_node(NodeKind::World, "");

  // Tweet-tweet edges, union over both selection directions, one entry per
  // unordered pair. Cosine is symmetric bitwise, so the weight is direction
  // independent.
  std::map<std::pair<NodeIndex, NodeIndex>, double> tweet_edges;
  for (std::size_t i = 0; i < neighbors.size(); ++i) {
    for (const Neighbor& nb : neighbors[i]) {
      if (nb.similarity <= 0.0) continue;
      auto a = static_cast<NodeIndex>(std::min<std::size_t>(i, nb.index));
      auto b = static_cast<NodeIndex>(std::max<std::size_t>(i, nb.index));
      if (a == b) throw ValidationError("tweet listed as its own neighbor");
      tweet_edges.emplace(std::make_pair(a, b), nb.similarity);
    }
  }
  for (const auto& [pair, weight] : tweet_edges) g.add_edge(pair.first, pair.second, weight);

  for (std::size_t i = 0; i < data.tweets.size(); ++i) {
    g.add_edge(static_cast<NodeIndex>(i), g.user_index_.at(data.tweets[i].author),
               cfg.tweet_user_weight);
  }
  std::set<std::pair<NodeIndex, NodeIndex>> seen_follow_edges;
  for (const auto& [a, b] : data.follows) {
    NodeIndex ia = g.user_index_.at(a);
    NodeIndex ib = g.user_index_.at(b);
    if (ib < ia) std::swap(ia, ib);
    if (!seen_follow_edges.emplace(ia, ib).second) continue;  // duplicate pair
    g.add_edge(ia, ib, cfg.user_user_weight);
  }
  for (const NodeRef& node : g.nodes_) {
    if (node.kind != NodeKind::User) continue;
    g.add_edge(g.user_index_.at(node.key), g.world_, cfg.user_world_weight);
  }
  return g;
}

void SocialGraph::inject_seeds(const std::vector<Tweet>& train_tweets) {
  for (const Tweet& tweet : train_tweets) {
    if (!tweet.gold) continue;
    auto it = tweet_index_.find(tweet.id);
    if (it == tweet_index_.end()) {
      throw ValidationError("cannot seed tweet '" + tweet.id + "': not a graph node");
    }
    seeds_[it->second] = seed_distribution(*tweet.gold);
  }
}

namespace {

std::string format_weight(double w) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", w);
  return buf;
}

double parse_double(std::string_view text, const std::string& context) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ParseError(context + "bad number '" + std::string(text) + "'");
  }
  return v;
}

std::vector<std::string_view> split_on(std::string_view line, char sep) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

}  // namespace

void SocialGraph::save(std::ostream& out) const {
  out << "#nodes\n";
  for (const NodeRef& node : nodes_) {
    out << to_string(node.kind) << '\t' << node.key << '\n';
  }
  out << "#edges\n";
  for (const Edge& e : edges_) {
    const NodeRef& a = nodes_[e.a];
    const NodeRef& b = nodes_[e.b];
    out << to_string(a.kind) << '\t' << a.key << '\t' << to_string(b.kind) << '\t'
        << b.key << '\t' << format_weight(e.weight) << '\n';
  }
  out << "#seeds\n";
  for (const auto& [index, dist] : seeds_) {
    out << nodes_[index].key << '\t';
    bool first = true;
    for (Lang lang : kAllLangs) {
      if (dist[lang] <= 0.0) continue;
      if (!first) out << ',';
      out << to_code(lang) << ':' << format_weight(dist[lang]);
      first = false;
    }
    out << '\n';
  }
}

SocialGraph SocialGraph::load(std::istream& in, std::string_view source) {
  const std::string src(source);
  SocialGraph g;
  enum class Section { None, Nodes, Edges, Seeds } section = Section::None;
  bool have_world = false;
  std::set<std::pair<NodeIndex, NodeIndex>> seen_edges;
  std::string line;
  std::size_t line_no = 0;

  while (std::getline(in, line)) {
    ++line_no;
    const std::string context = src + ":" + std::to_string(line_no) + ": ";
    if (line == "#nodes") {
      section = Section::Nodes;
      continue;
    }
    if (line == "#edges") {
      section = Section::Edges;
      continue;
    }
    if (line == "#seeds") {
      section = Section::Seeds;
      continue;
    }
    if (line.empty()) continue;

    switch (section) {
      case Section::None:
        throw ParseError(context + "content before #nodes section");
      case Section::Nodes: {
        auto fields = split_on(line, '\t');
        if (fields.size() != 2) throw ParseError(context + "expected 'kind<TAB>key'");
        auto kind = node_kind_from_string(fields[0]);
        if (!kind) throw ParseError(context + "unknown node kind '" + std::string(fields[0]) + "'");
        if (*kind == NodeKind::World) {
          if (have_world) throw ParseError(context + "second world node");
          if (!fields[1].empty()) throw ParseError(context + "world node key must be empty");
          have_world = true;
          g.world_ = static_cast<NodeIndex>(g.nodes_.size());
        } else if (fields[1].empty()) {
          throw ParseError(context + "empty node key");
        }
        if (g.find(*kind, fields[1]) && *kind != NodeKind::World) {
          throw ParseError(context + "duplicate node");
        }
        g.add_node(*kind, std::string(fields[1]));
        break;
      }
      case Section::Edges: {
        auto fields = split_on(line, '\t');
        if (fields.size() != 5) {
          throw ParseError(context + "expected 'kindA<TAB>keyA<TAB>kindB<TAB>keyB<TAB>weight'");
        }
        auto resolve = [&](std::string_view kind_text,
                           std::string_view key) -> NodeIndex {
          auto kind = node_kind_from_string(kind_text);
          if (!kind) {
            throw ParseError(context + "unknown node kind '" + std::string(kind_text) + "'");
          }
          auto idx = g.find(*kind, key);
          if (!idx) {
            throw ParseError(context + "edge endpoint '" + std::string(key) +
                             "' is not a node");
          }
          return *idx;
        };
        const NodeIndex a = resolve(fields[0], fields[1]);
        const NodeIndex b = resolve(fields[2], fields[3]);
        const double weight = parse_double(fields[4], context);
        if (a == b) throw ParseError(context + "self-loop edge");
        if (!(weight > 0.0)) throw ParseError(context + "edge weight must be positive");
        if (!seen_edges.emplace(std::min(a, b), std::max(a, b)).second) {
          throw ParseError(context + "duplicate edge");
        }
        g.add_edge(a, b, weight);
        break;
      }
      case Section::Seeds: {
        auto fields = split_on(line, '\t');
        if (fields.size() != 2) throw ParseError(context + "expected 'tweet_id<TAB>lang:prob,...'");
        auto idx = g.find(NodeKind::Tweet, fields[0]);
        if (!idx) {
          throw ParseError(context + "seed tweet '" + std::string(fields[0]) +
                           "' is not a node");
        }
        LabelDistribution dist;
        for (std::string_view part : split_on(fields[1], ',')) {
          auto sep = part.find(':');
          if (sep == std::string_view::npos) {
            throw ParseError(context + "expected 'lang:prob' entry");
          }
          auto lang = lang_from_code(part.substr(0, sep));
          if (!lang) {
            throw ParseError(context + "unknown language code '" +
                             std::string(part.substr(0, sep)) + "'");
          }
          const double prob = parse_double(part.substr(sep + 1), context);
          if (!(prob > 0.0)) throw ParseError(context + "seed probability must be positive");
          dist[*lang] = prob;
        }
        const double total = dist.sum();
        if (std::abs(total - 1.0) > 1e-6) {
          throw ParseError(context + "seed distribution does not sum to 1");
        }
        // Written with 9 significant digits; renormalize the rounding away.
        g.seeds_[*idx] = dist.normalized();
        break;
      }
    }
  }
  if (!have_world) throw ParseError(src + ": graph has no world node");
  return g;
}

void SocialGraph::save_file(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write graph file '" + path + "'");
  save(out);
}

SocialGraph SocialGraph::load_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open graph file '" + path + "'");
  return load(in, path);
}

}  // namespace langprop
