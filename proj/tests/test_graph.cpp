#include <doctest.h>

#include <queue>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "langprop/graph.hpp"
#include "support/oracles.hpp"

using namespace langprop;

namespace {

Dataset two_tweet_dataset() {
  const std::vector<Tweet> train = {{"t1", "u1", "hola mundo", GoldLabel::single(Lang::Es)}};
  const std::vector<Tweet> test = {{"t2", "u2", "hola tierra", std::nullopt}};
  return merge_dataset(train, test, {{"u1", "u2"}});
}

void expect_load_error(const std::string& text, const std::string& needle) {
  std::istringstream in(text);
  try {
    (void)SocialGraph::load(in, "g.tsv");
    FAIL_CHECK("expected ParseError for: " << needle);
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find(needle) != std::string::npos);
  }
}

bool connected_to_world(const SocialGraph& g) {
  std::vector<char> seen(g.node_count(), 0);
  std::queue<SocialGraph::NodeIndex> frontier;
  frontier.push(g.world());
  seen[g.world()] = 1;
  while (!frontier.empty()) {
    const auto v = frontier.front();
    frontier.pop();
    for (const auto& [u, w] : g.adjacency()[v]) {
      (void)w;
      if (!seen[u]) {
        seen[u] = 1;
        frontier.push(u);
      }
    }
  }
  for (char s : seen) {
    if (!s) return false;
  }
  return true;
}

}  // namespace

TEST_SUITE("graph") {

TEST_CASE("node kind names round-trip") {
  for (NodeKind kind : {NodeKind::Tweet, NodeKind::User, NodeKind::World}) {
    CHECK(node_kind_from_string(to_string(kind)) == kind);
  }
  CHECK(!node_kind_from_string("author"));
  CHECK(!node_kind_from_string(""));
}

TEST_CASE("config validation") {
  GraphConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.tweet_user_weight = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
  cfg = {};
  cfg.user_user_weight = -1.0;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
  cfg = {};
  cfg.user_world_weight = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
}

TEST_CASE("one tweet and its author make three nodes and two edges") {
  Dataset data;
  data.tweets = {{"t1", "u1", "hola", std::nullopt}};
  const SocialGraph g = SocialGraph::build(data, {{}});
  CHECK(g.node_count() == 3);
  CHECK(g.edge_count() == 2);
  CHECK(g.node(0) == NodeRef{NodeKind::Tweet, "t1"});
  CHECK(g.node(1) == NodeRef{NodeKind::User, "u1"});
  CHECK(g.node(2) == NodeRef{NodeKind::World, ""});
  CHECK(g.world() == 2);
  CHECK(g.edges()[0] == SocialGraph::Edge{0, 1, 100.0});
  CHECK(g.edges()[1] == SocialGraph::Edge{1, 2, 0.001});
}

TEST_CASE("two tweets, a follow and a neighbor pair") {
  const Dataset data = two_tweet_dataset();
  const NeighborLists neighbors = {{{1, 0.5}}, {}};
  const SocialGraph g = SocialGraph::build(data, neighbors);

  // tweets, authors in first-seen order, world last
  REQUIRE(g.node_count() == 5);
  CHECK(g.node(0).key == "t1");
  CHECK(g.node(1).key == "t2");
  CHECK(g.node(2).key == "u1");
  CHECK(g.node(3).key == "u2");
  CHECK(g.node(4).kind == NodeKind::World);

  // |edges| = |TT| + |tweets| + |follows| + |users|
  REQUIRE(g.edge_count() == 1 + 2 + 1 + 2);
  CHECK(g.edges()[0] == SocialGraph::Edge{0, 1, 0.5});
  CHECK(g.edges()[1] == SocialGraph::Edge{0, 2, 100.0});
  CHECK(g.edges()[2] == SocialGraph::Edge{1, 3, 100.0});
  CHECK(g.edges()[3] == SocialGraph::Edge{2, 3, 1.0});
  CHECK(g.edges()[4] == SocialGraph::Edge{2, 4, 0.001});
  CHECK(g.edges()[5] == SocialGraph::Edge{3, 4, 0.001});
  CHECK(connected_to_world(g));

  CHECK(g.find(NodeKind::Tweet, "t2") == 1);
  CHECK(g.find(NodeKind::User, "u2") == 3);
  CHECK(!g.find(NodeKind::Tweet, "t9"));
  CHECK(g.find(NodeKind::World, "anything") == 4);
}

TEST_CASE("custom weights are applied") {
  const Dataset data = two_tweet_dataset();
  GraphConfig cfg;
  cfg.tweet_user_weight = 7.0;
  cfg.user_user_weight = 3.0;
  cfg.user_world_weight = 0.25;
  const SocialGraph g = SocialGraph::build(data, {{}, {}}, cfg);
  CHECK(g.edges()[0].weight == 7.0);
  CHECK(g.edges()[2].weight == 3.0);
  CHECK(g.edges()[3].weight == 0.25);
}

TEST_CASE("neighbor selection is union-symmetrized and deduplicated") {
  const Dataset data = two_tweet_dataset();
  // Both directions listed: still a single undirected edge.
  const SocialGraph both = SocialGraph::build(data, {{{1, 0.5}}, {{0, 0.5}}});
  CHECK(both.edge_count() == 6);
  // Zero similarity entries are dropped entirely.
  const SocialGraph zero = SocialGraph::build(data, {{{1, 0.0}}, {}});
  CHECK(zero.edge_count() == 5);
}

TEST_CASE("build rejects malformed input") {
  const Dataset data = two_tweet_dataset();
  CHECK_THROWS_AS((void)SocialGraph::build(data, {{}}), ValidationError);  // size mismatch
  CHECK_THROWS_AS((void)SocialGraph::build(data, {{{0, 0.5}}, {}}), ValidationError);

  Dataset dup = data;
  dup.tweets.push_back(dup.tweets[0]);
  CHECK_THROWS_AS((void)SocialGraph::build(dup, {{}, {}, {}}), ValidationError);

  Dataset self = data;
  self.follows.push_back({"u1", "u1"});
  CHECK_THROWS_AS((void)SocialGraph::build(self, {{}, {}}), ValidationError);
}

TEST_CASE("seed injection per gold kind") {
  const Dataset data = two_tweet_dataset();
  SocialGraph g = SocialGraph::build(data, {{}, {}});

  SUBCASE("single label becomes a point mass") {
    g.inject_seeds({{"t1", "u1", "hola mundo", GoldLabel::single(Lang::Es)}});
    REQUIRE(g.seeds().size() == 1);
    const LabelDistribution& d = g.seeds().at(0);
    CHECK(d[Lang::Es] == 1.0);
    CHECK(d.sum() == doctest::Approx(1.0));
  }
  SUBCASE("ambiguous label splits uniformly over members") {
    g.inject_seeds({{"t1", "u1", "hola mundo", GoldLabel::ambiguous({Lang::Es, Lang::Ca})}});
    const LabelDistribution& d = g.seeds().at(0);
    CHECK(d[Lang::Es] == 0.5);
    CHECK(d[Lang::Ca] == 0.5);
    CHECK(d[Lang::Pt] == 0.0);
  }
  SUBCASE("undecided spreads over all six languages") {
    g.inject_seeds({{"t1", "u1", "hola mundo", GoldLabel::undecided()}});
    const LabelDistribution& d = g.seeds().at(0);
    for (Lang lang : kAllLangs) CHECK(d[lang] == doctest::Approx(1.0 / 6.0));
  }
  SUBCASE("unlabeled tweets are skipped") {
    g.inject_seeds({{"t1", "u1", "hola mundo", std::nullopt}});
    CHECK(g.seeds().empty());
  }
  SUBCASE("unknown tweet id is an error") {
    try {
      g.inject_seeds({{"tx", "u1", "hola", GoldLabel::single(Lang::Es)}});
      FAIL_CHECK("expected ValidationError");
    } catch (const ValidationError& e) {
      CHECK(std::string(e.what()).find("tx") != std::string::npos);
    }
  }
}

TEST_CASE("count identities hold on random datasets") {
  std::mt19937_64 rng(11);
  for (int round = 0; round < 20; ++round) {
    const int n_tweets = oracles::rand_int(rng, 1, 25);
    const int n_users = oracles::rand_int(rng, 1, 8);
    std::vector<Tweet> tweets;
    for (int t = 0; t < n_tweets; ++t) {
      tweets.push_back({"t" + std::to_string(t),
                        "u" + std::to_string(oracles::rand_int(rng, 0, n_users - 1)),
                        "w" + std::to_string(oracles::rand_int(rng, 0, 5)), std::nullopt});
    }
    std::vector<UserPair> follows;
    for (int a = 0; a < n_users; ++a) {
      for (int b = a + 1; b < n_users; ++b) {
        if (oracles::rand_int(rng, 0, 3) == 0) {
          follows.push_back({"u" + std::to_string(a), "u" + std::to_string(b)});
        }
      }
    }
    const Dataset data = merge_dataset(tweets, {}, follows);
    const NeighborLists neighbors = top_k_neighbors(data.tweets);

    std::set<std::pair<std::size_t, std::size_t>> tt_pairs;
    for (std::size_t i = 0; i < neighbors.size(); ++i) {
      for (const Neighbor& nb : neighbors[i]) {
        tt_pairs.emplace(std::min<std::size_t>(i, nb.index),
                         std::max<std::size_t>(i, nb.index));
      }
    }
    std::set<std::string> distinct_users;
    for (const Tweet& t : data.tweets) distinct_users.insert(t.author);
    for (const auto& [a, b] : data.follows) {
      distinct_users.insert(a);
      distinct_users.insert(b);
    }

    const SocialGraph g = SocialGraph::build(data, neighbors);
    CHECK(g.node_count() == data.tweets.size() + distinct_users.size() + 1);
    CHECK(g.edge_count() ==
          tt_pairs.size() + data.tweets.size() + data.follows.size() + distinct_users.size());
    CHECK(connected_to_world(g));
  }
}

TEST_CASE("save emits the sectioned format") {
  Dataset data;
  data.tweets = {{"t1", "u1", "hola", GoldLabel::single(Lang::Es)}};
  SocialGraph g = SocialGraph::build(data, {{}});
  g.inject_seeds(data.tweets);
  std::ostringstream out;
  g.save(out);
  CHECK(out.str() ==
        "#nodes\n"
        "tweet\tt1\n"
        "user\tu1\n"
        "world\t\n"
        "#edges\n"
        "tweet\tt1\tuser\tu1\t100\n"
        "user\tu1\tworld\t\t0.001\n"
        "#seeds\n"
        "t1\tes:1\n");
}

TEST_CASE("save/load round trip is byte stable") {
  const std::vector<Tweet> train = {
      {"t1", "u1", "hola mundo", GoldLabel::single(Lang::Es)},
      {"t2", "u1", "bona nit", GoldLabel::ambiguous({Lang::Es, Lang::Ca})},
      {"t3", "u2", "???", GoldLabel::undecided()},
  };
  const std::vector<Tweet> test = {{"t4", "u3", "hola tierra", std::nullopt}};
  const Dataset data = merge_dataset(train, test, {{"u1", "u2"}, {"u2", "u3"}});
  const NeighborLists neighbors = top_k_neighbors(data.tweets);
  SocialGraph g = SocialGraph::build(data, neighbors);
  g.inject_seeds(train);

  std::ostringstream first;
  g.save(first);
  std::istringstream in(first.str());
  const SocialGraph loaded = SocialGraph::load(in);
  std::ostringstream second;
  loaded.save(second);
  CHECK(first.str() == second.str());

  CHECK(loaded.node_count() == g.node_count());
  CHECK(loaded.edge_count() == g.edge_count());
  CHECK(loaded.world() == g.world());
  REQUIRE(loaded.edges().size() == g.edges().size());
  for (std::size_t e = 0; e < g.edges().size(); ++e) {
    CAPTURE(e);
    CHECK(loaded.edges()[e].a == g.edges()[e].a);
    CHECK(loaded.edges()[e].b == g.edges()[e].b);
    // weights round-trip through nine significant digits
    CHECK(loaded.edges()[e].weight ==
          doctest::Approx(g.edges()[e].weight).epsilon(1e-8));
  }
  REQUIRE(loaded.seeds().size() == 3);
  // The undecided seed is renormalized after its 9-digit round trip.
  CHECK(loaded.seeds().at(2).sum() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("loader rejects malformed graphs") {
  expect_load_error("tweet\tt1\n", "content before #nodes");
  expect_load_error("#nodes\nauthor\tt1\n", "unknown node kind 'author'");
  expect_load_error("#nodes\ntweet\n", "expected 'kind<TAB>key'");
  expect_load_error("#nodes\ntweet\tt1\ntweet\tt1\nworld\t\n", "duplicate node");
  expect_load_error("#nodes\ntweet\t\nworld\t\n", "empty node key");
  expect_load_error("#nodes\nworld\t\nworld\t\n", "second world node");
  expect_load_error("#nodes\nworld\tw1\n", "world node key must be empty");
  expect_load_error("#nodes\ntweet\tt1\n", "no world node");
  expect_load_error("#nodes\nworld\t\n#edges\ntweet\tt1\tworld\t\t1\n",
                    "edge endpoint 't1' is not a node");
  expect_load_error("#nodes\ntweet\tt1\nworld\t\n#edges\ntweet\tt1\ttweet\tt1\t1\n",
                    "self-loop edge");
  expect_load_error(
      "#nodes\ntweet\tt1\nworld\t\n#edges\ntweet\tt1\tworld\t\t1\ntweet\tt1\tworld\t\t1\n",
      "duplicate edge");
  expect_load_error("#nodes\ntweet\tt1\nworld\t\n#edges\ntweet\tt1\tworld\t\t0\n",
                    "edge weight must be positive");
  expect_load_error("#nodes\ntweet\tt1\nworld\t\n#edges\ntweet\tt1\tworld\t\tabc\n",
                    "bad number 'abc'");
  expect_load_error("#nodes\nuser\tu1\nworld\t\n#seeds\nu1\tes:1\n",
                    "seed tweet 'u1' is not a node");
  expect_load_error("#nodes\ntweet\tt1\nworld\t\n#seeds\nt1\tfr:1\n",
                    "unknown language code 'fr'");
  expect_load_error("#nodes\ntweet\tt1\nworld\t\n#seeds\nt1\tes:0.4\n",
                    "does not sum to 1");
  expect_load_error("#nodes\ntweet\tt1\nworld\t\n#seeds\nt1\tes\n", "expected 'lang:prob'");
  expect_load_error("#nodes\ntweet\tt1\nworld\t\n#seeds\nt1\tes:0,pt:1\n",
                    "seed probability must be positive");
}

TEST_CASE("loader errors carry the source line") {
  expect_load_error("#nodes\ntweet\tt1\nbadline\n", "g.tsv:3: ");
}

}  // TEST_SUITE
