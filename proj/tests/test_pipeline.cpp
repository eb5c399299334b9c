#include <doctest.h>

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "langprop/pipeline.hpp"

using namespace langprop;

namespace {

struct TempDir {
  std::filesystem::path path;

  explicit TempDir(const std::string& name)
      : path(std::filesystem::current_path() /
             ("tmp_" + name + "_" + std::to_string(::getpid()))) {
    std::filesystem::remove_all(path);
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

SynthConfig small_synth() {
  SynthConfig cfg;
  cfg.seed = 5;
  cfg.n_train = 60;
  cfg.n_test = 40;
  cfg.users = 20;
  cfg.vocab_size = 40;
  cfg.overlap = 0.2;
  return cfg;
}

// Writes the three synth files and returns their paths.
struct SynthFiles {
  std::string train, test, follows;
};

SynthFiles make_synth_files(const TempDir& dir, const SynthConfig& cfg) {
  SynthFiles files{dir.file("train.tsv"), dir.file("test.tsv"), dir.file("follows.tsv")};
  run_synth({cfg, files.train, files.test, files.follows});
  return files;
}

}  // namespace

TEST_SUITE("pipeline") {

TEST_CASE("synth stage round-trips through the files") {
  const TempDir dir("synth_stage");
  const SynthConfig cfg = small_synth();
  const SynthOutcome outcome =
      run_synth({cfg, dir.file("train.tsv"), dir.file("test.tsv"), dir.file("follows.tsv")});
  const SynthData direct = generate_synth(cfg);
  CHECK(outcome.train == direct.train.size());
  CHECK(outcome.test == direct.test.size());
  CHECK(outcome.follows == direct.follows.size());
  CHECK(load_tweets(dir.file("train.tsv")) == direct.train);
  CHECK(load_tweets(dir.file("test.tsv")) == direct.test);
  CHECK(load_follows(dir.file("follows.tsv")) == direct.follows);
}

TEST_CASE("train-content stage writes a working model") {
  const TempDir dir("train_stage");
  const SynthFiles files = make_synth_files(dir, small_synth());

  TrainContentOptions opts;
  opts.tweets_path = files.train;
  opts.dev_path = files.test;
  opts.model_path = dir.file("model.tsv");
  opts.space_path = dir.file("space.tsv");
  const TrainContentOutcome outcome = run_train_content(opts);

  CHECK(outcome.features > 0);
  CHECK(outcome.languages == std::vector<Lang>{Lang::Es, Lang::Pt});
  REQUIRE(outcome.dev_accuracy.has_value());
  CHECK(*outcome.dev_accuracy >= 0.7);  // low overlap, loose bound

  const FeatureSpace space = FeatureSpace::load_file(opts.space_path);
  CHECK(space.size() == outcome.features);
  const ContentModel model = ContentModel::load_file(opts.model_path);
  CHECK(model.languages() == outcome.languages);
}

TEST_CASE("dev accuracy is absent when nothing is scorable") {
  const TempDir dir("dev_empty");
  const SynthFiles files = make_synth_files(dir, small_synth());
  {
    std::ofstream und_only(dir.file("dev.tsv"), std::ios::binary);
    und_only << "d1\tu0\tund\t???\n";
  }
  TrainContentOptions opts;
  opts.tweets_path = files.train;
  opts.dev_path = dir.file("dev.tsv");
  opts.model_path = dir.file("model.tsv");
  opts.space_path = dir.file("space.tsv");
  CHECK(!run_train_content(opts).dev_accuracy.has_value());
}

TEST_CASE("build-graph stage matches the in-memory construction") {
  const TempDir dir("graph_stage");
  const SynthConfig cfg = small_synth();
  const SynthFiles files = make_synth_files(dir, cfg);

  BuildGraphOptions opts;
  opts.train_path = files.train;
  opts.test_path = files.test;
  opts.follows_path = files.follows;
  opts.graph_path = dir.file("graph.tsv");
  const BuildGraphOutcome outcome = run_build_graph(opts);

  const SynthData direct = generate_synth(cfg);
  const Dataset data = merge_dataset(direct.train, direct.test, direct.follows);
  SocialGraph expected = SocialGraph::build(data, top_k_neighbors(data.tweets));
  expected.inject_seeds(direct.train);
  CHECK(outcome.nodes == expected.node_count());
  CHECK(outcome.edges == expected.edge_count());
  CHECK(outcome.seeds == expected.seeds().size());

  std::ostringstream direct_bytes;
  expected.save(direct_bytes);
  CHECK(read_file(opts.graph_path) == direct_bytes.str());
}

TEST_CASE("running the stages by hand equals run-all byte for byte") {
  const TempDir dir("chain");
  const SynthFiles files = make_synth_files(dir, small_synth());

  const std::string stage_dir = dir.file("stages");
  std::filesystem::create_directories(stage_dir);
  const auto stage = [&](const std::string& name) {
    return (std::filesystem::path(stage_dir) / name).string();
  };

  TrainContentOptions train_opts;
  train_opts.tweets_path = files.train;
  train_opts.model_path = stage("model.tsv");
  train_opts.space_path = stage("space.tsv");
  run_train_content(train_opts);

  BuildGraphOptions graph_opts;
  graph_opts.train_path = files.train;
  graph_opts.test_path = files.test;
  graph_opts.follows_path = files.follows;
  graph_opts.graph_path = stage("graph.tsv");
  run_build_graph(graph_opts);

  PropagateOptions prop_opts;
  prop_opts.graph_path = stage("graph.tsv");
  prop_opts.output_path = stage("propagation.tsv");
  run_propagate(prop_opts);

  PredictOptions predict_opts;
  predict_opts.tweets_path = files.test;
  predict_opts.model_path = stage("model.tsv");
  predict_opts.space_path = stage("space.tsv");
  predict_opts.propagation_path = stage("propagation.tsv");
  predict_opts.output_path = stage("predictions.tsv");
  run_predict(predict_opts);

  EvaluateOptions eval_opts;
  eval_opts.gold_path = files.test;
  eval_opts.predictions_path = stage("predictions.tsv");
  eval_opts.report_path = stage("report.tsv");
  run_evaluate(eval_opts);

  RunAllOptions all_opts;
  all_opts.train_path = files.train;
  all_opts.test_path = files.test;
  all_opts.follows_path = files.follows;
  all_opts.out_dir = dir.file("all");
  const RunAllOutcome outcome = run_all(all_opts);

  for (const char* name : {"model.tsv", "space.tsv", "graph.tsv", "propagation.tsv",
                           "predictions.tsv", "report.tsv"}) {
    CAPTURE(name);
    CHECK(read_file(stage(name)) ==
          read_file((std::filesystem::path(all_opts.out_dir) / name).string()));
  }
  CHECK(outcome.predictions.predictions == 40);
  CHECK(outcome.report.scored == 40);
  CHECK(outcome.propagation.iterations >= 1);
}

TEST_CASE("lambda2 = 0 never touches the propagation dump") {
  const TempDir dir("content_only");
  const SynthFiles files = make_synth_files(dir, small_synth());

  TrainContentOptions train_opts;
  train_opts.tweets_path = files.train;
  train_opts.model_path = dir.file("model.tsv");
  train_opts.space_path = dir.file("space.tsv");
  run_train_content(train_opts);

  PredictOptions base;
  base.tweets_path = files.test;
  base.model_path = dir.file("model.tsv");
  base.space_path = dir.file("space.tsv");
  base.output_path = dir.file("a.tsv");
  base.hybrid.lambda1 = 1.0;
  base.hybrid.lambda2 = 0.0;
  run_predict(base);

  PredictOptions with_dump = base;
  with_dump.propagation_path = dir.file("does_not_exist.tsv");
  with_dump.output_path = dir.file("b.tsv");
  run_predict(with_dump);  // path ignored entirely at lambda2 = 0

  CHECK(read_file(dir.file("a.tsv")) == read_file(dir.file("b.tsv")));
}

TEST_CASE("predict errors name the problem") {
  const TempDir dir("predict_errors");
  const SynthFiles files = make_synth_files(dir, small_synth());

  TrainContentOptions train_opts;
  train_opts.tweets_path = files.train;
  train_opts.model_path = dir.file("model.tsv");
  train_opts.space_path = dir.file("space.tsv");
  run_train_content(train_opts);

  PredictOptions opts;
  opts.tweets_path = files.test;
  opts.model_path = dir.file("model.tsv");
  opts.space_path = dir.file("space.tsv");
  opts.output_path = dir.file("preds.tsv");

  SUBCASE("social weight without a dump") {
    try {
      (void)run_predict(opts);  // default lambda2 = 0.5
      FAIL_CHECK("expected ValidationError");
    } catch (const ValidationError& e) {
      CHECK(std::string(e.what()).find("propagation dump is required") != std::string::npos);
    }
  }
  SUBCASE("dump missing a tweet") {
    const std::vector<Tweet> test_tweets = load_tweets(files.test);
    {
      std::ofstream dump(dir.file("partial.tsv"), std::ios::binary);
      dump << "tweet\t" << test_tweets[0].id << "\tes:1.000000\n";
    }
    opts.propagation_path = dir.file("partial.tsv");
    try {
      (void)run_predict(opts);
      FAIL_CHECK("expected ValidationError");
    } catch (const ValidationError& e) {
      const std::string what = e.what();
      CHECK(what.find("missing from the propagation dump") != std::string::npos);
      CHECK(what.find(test_tweets[1].id) != std::string::npos);
    }
  }
  SUBCASE("missing model file") {
    opts.model_path = dir.file("nope.tsv");
    opts.hybrid.lambda2 = 0.0;
    opts.hybrid.lambda1 = 1.0;
    CHECK_THROWS_AS((void)run_predict(opts), ValidationError);
  }
}

TEST_CASE("separable data evaluates nearly perfectly") {
  const TempDir dir("separable");
  SynthConfig cfg = small_synth();
  cfg.overlap = 0.0;
  cfg.monolinguality = 1.0;
  cfg.n_train = 100;
  const SynthFiles files = make_synth_files(dir, cfg);

  RunAllOptions all_opts;
  all_opts.train_path = files.train;
  all_opts.test_path = files.test;
  all_opts.follows_path = files.follows;
  all_opts.out_dir = dir.file("out");
  all_opts.hybrid.lambda1 = 1.0;
  all_opts.hybrid.lambda2 = 0.0;
  const RunAllOutcome outcome = run_all(all_opts);
  CHECK(outcome.report.macro.f1 >= 95.0);
}

TEST_CASE("identical vocabularies: the graph recovers what content cannot") {
  // overlap 1 + monolinguality 1: the text carries no language signal at
  // all, so content-only sits near chance while propagation through the
  // author/community structure recovers the labels.
  const TempDir dir("uninformative");
  SynthConfig cfg;
  cfg.seed = 13;
  cfg.n_train = 150;
  cfg.n_test = 100;
  cfg.users = 30;
  cfg.overlap = 1.0;
  cfg.monolinguality = 1.0;
  cfg.p_intra = 0.3;
  cfg.p_inter = 0.0;
  cfg.vocab_size = 60;
  const SynthFiles files = make_synth_files(dir, cfg);

  RunAllOptions content_opts;
  content_opts.train_path = files.train;
  content_opts.test_path = files.test;
  content_opts.follows_path = files.follows;
  content_opts.out_dir = dir.file("content");
  content_opts.hybrid = {1.0, 0.0, 0.0};
  const double content_f = run_all(content_opts).report.macro.f1;

  RunAllOptions hybrid_opts = content_opts;
  hybrid_opts.out_dir = dir.file("hybrid");
  hybrid_opts.hybrid = {0.5, 0.5, 0.0};
  const double hybrid_f = run_all(hybrid_opts).report.macro.f1;

  CAPTURE(content_f);
  CAPTURE(hybrid_f);
  CHECK(content_f < 80.0);
  CHECK(hybrid_f > content_f + 10.0);
}

TEST_CASE("stage option validation") {
  CHECK_THROWS_AS((void)run_train_content({}), ValidationError);
  CHECK_THROWS_AS((void)run_build_graph({}), ValidationError);
  CHECK_THROWS_AS((void)run_propagate({}), ValidationError);
  CHECK_THROWS_AS((void)run_predict({}), ValidationError);
  CHECK_THROWS_AS((void)run_evaluate({}), ValidationError);
  CHECK_THROWS_AS((void)run_synth({}), ValidationError);
  CHECK_THROWS_AS((void)run_all({}), ValidationError);
}

}  // TEST_SUITE
