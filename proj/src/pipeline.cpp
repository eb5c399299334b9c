#include "langprop/pipeline.hpp"

#include <filesystem>
#include <unordered_map>

#include "langprop/features.hpp"

namespace langprop {

namespace {

/// Dev accuracy: argmax of the normalized content scores against gold,
/// counting ambiguous gold as correct when the argmax is a member. Undecided
/// and unlabeled tweets are skipped (argmax never outputs und).
std::optional<double> dev_accuracy(const ContentModel& model, const FeatureSpace& space,
                                   const std::vector<Tweet>& dev) {
  std::size_t scored = 0;
  std::size_t correct = 0;
  const HybridConfig content_only{1.0, 0.0, 0.0};
  for (const Tweet& tweet : dev) {
    if (!tweet.gold || tweet.gold->kind() == GoldLabel::Kind::Undecided) continue;
    ++scored;
    const LabelDistribution scores = normalize(model.predict_scores(tweet.text, space));
    const std::optional<Lang> pred = decide(scores, content_only);
    if (pred && tweet.gold->contains(*pred)) ++correct;
  }
  if (scored == 0) return std::nullopt;
  return static_cast<double>(correct) / static_cast<double>(scored);
}

}  // namespace

TrainContentOutcome run_train_content(const TrainContentOptions& opts) {
  if (opts.tweets_path.empty()) throw ValidationError("training tweets path is required");
  if (opts.model_path.empty()) throw ValidationError("model output path is required");
  if (opts.space_path.empty()) throw ValidationError("feature-space output path is required");

  const std::vector<Tweet> tweets = load_tweets(opts.tweets_path);
  std::vector<std::vector<std::string>> corpus;
  corpus.reserve(tweets.size());
  for (const Tweet& tweet : tweets) corpus.push_back(char_ngrams(tweet.text));
  const FeatureSpace space = FeatureSpace::build(corpus, opts.min_df);

  TrainContentOutcome outcome;
  const ContentModel model = ContentModel::train(tweets, space, opts.train, {},
                                                 &outcome.warnings, opts.threads);
  space.save_file(opts.space_path);
  model.save_file(opts.model_path);
  outcome.features = space.size();
  outcome.languages = model.languages();
  if (!opts.dev_path.empty()) {
    outcome.dev_accuracy = dev_accuracy(model, space, load_tweets(opts.dev_path));
  }
  return outcome;
}

BuildGraphOutcome run_build_graph(const BuildGraphOptions& opts) {
  if (opts.train_path.empty()) throw ValidationError("train tweets path is required");
  if (opts.test_path.empty()) throw ValidationError("test tweets path is required");
  if (opts.graph_path.empty()) throw ValidationError("graph output path is required");

  const std::vector<Tweet> train = load_tweets(opts.train_path);
  const std::vector<Tweet> test = load_tweets(opts.test_path);
  std::vector<UserPair> follows;
  if (!opts.follows_path.empty()) follows = load_follows(opts.follows_path);

  const Dataset data = merge_dataset(train, test, follows);
  const NeighborLists neighbors = top_k_neighbors(data.tweets, opts.knn, opts.threads);
  SocialGraph graph = SocialGraph::build(data, neighbors, opts.graph);
  graph.inject_seeds(train);
  graph.save_file(opts.graph_path);
  return {graph.node_count(), graph.edge_count(), graph.seeds().size()};
}

PropagateOutcome run_propagate(const PropagateOptions& opts) {
  if (opts.graph_path.empty()) throw ValidationError("graph path is required");
  if (opts.output_path.empty()) throw ValidationError("propagation output path is required");

  const SocialGraph graph = SocialGraph::load_file(opts.graph_path);
  const MadResult result = propagate(graph, opts.mad, opts.threads);
  write_propagation_file(opts.output_path, graph, result);
  return {result.iterations, result.converged};
}

PredictOutcome run_predict(const PredictOptions& opts) {
  if (opts.tweets_path.empty()) throw ValidationError("tweets path is required");
  if (opts.model_path.empty()) throw ValidationError("model path is required");
  if (opts.space_path.empty()) throw ValidationError("feature-space path is required");
  if (opts.output_path.empty()) throw ValidationError("predictions output path is required");
  opts.hybrid.validate();
  const bool use_social = opts.hybrid.lambda2 > 0.0;
  if (use_social && opts.propagation_path.empty()) {
    throw ValidationError("propagation dump is required when lambda2 > 0");
  }

  const std::vector<Tweet> tweets = load_tweets(opts.tweets_path);
  const FeatureSpace space = FeatureSpace::load_file(opts.space_path);
  const ContentModel model = ContentModel::load_file(opts.model_path);
  std::unordered_map<std::string, LabelDistribution> social;
  if (use_social) social = load_tweet_social_file(opts.propagation_path);

  std::vector<Prediction> predictions;
  predictions.reserve(tweets.size());
  for (const Tweet& tweet : tweets) {
    const LabelDistribution content = normalize(model.predict_scores(tweet.text, space));
    LabelDistribution social_scores;
    if (use_social) {
      auto it = social.find(tweet.id);
      if (it == social.end()) {
        throw ValidationError("tweet '" + tweet.id + "' is missing from the propagation dump");
      }
      social_scores = it->second;
    }
    const LabelDistribution combined = combine(content, social_scores, opts.hybrid);
    predictions.push_back({tweet.id, decide(combined, opts.hybrid), combined});
  }
  write_predictions_file(opts.output_path, predictions);
  return {predictions.size()};
}

EvaluationReport run_evaluate(const EvaluateOptions& opts) {
  if (opts.gold_path.empty()) throw ValidationError("gold tweets path is required");
  if (opts.predictions_path.empty()) throw ValidationError("predictions path is required");

  const std::vector<Tweet> gold = load_tweets(opts.gold_path);
  const std::vector<Prediction> predictions = load_predictions_file(opts.predictions_path);
  const EvaluationReport report = score_predictions(gold, predictions);
  if (!opts.report_path.empty()) write_report_tsv_file(opts.report_path, report);
  return report;
}

SynthOutcome run_synth(const SynthOptions& opts) {
  if (opts.train_path.empty() || opts.test_path.empty() || opts.follows_path.empty()) {
    throw ValidationError("train, test and follows output paths are required");
  }
  const SynthData data = generate_synth(opts.synth);
  write_tweets_file(opts.train_path, data.train);
  write_tweets_file(opts.test_path, data.test);
  write_follows_file(opts.follows_path, data.follows);
  return {data.train.size(), data.test.size(), data.follows.size()};
}

RunAllOutcome run_all(const RunAllOptions& opts) {
  if (opts.out_dir.empty()) throw ValidationError("output directory is required");
  std::filesystem::create_directories(opts.out_dir);
  const auto path_in = [&](const char* name) {
    return (std::filesystem::path(opts.out_dir) / name).string();
  };

  RunAllOutcome outcome;
  outcome.train = run_train_content({opts.train_path,
                                     /*dev_path=*/"",
                                     path_in("model.tsv"),
                                     path_in("space.tsv"),
                                     opts.train,
                                     opts.min_df,
                                     opts.threads});
  outcome.graph = run_build_graph({opts.train_path, opts.test_path, opts.follows_path,
                                   path_in("graph.tsv"), opts.knn, opts.graph,
                                   opts.threads});
  outcome.propagation = run_propagate(
      {path_in("graph.tsv"), path_in("propagation.tsv"), opts.mad, opts.threads});
  outcome.predictions_path = path_in("predictions.tsv");
  outcome.predictions = run_predict({opts.test_path, path_in("model.tsv"),
                                     path_in("space.tsv"), path_in("propagation.tsv"),
                                     outcome.predictions_path, opts.hybrid});
  outcome.report_path = path_in("report.tsv");
  outcome.report =
      run_evaluate({opts.test_path, outcome.predictions_path, outcome.report_path});
  return outcome;
}

}  // namespace langprop
