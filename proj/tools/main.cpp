#include <algorithm>
#include <cstdio>
#include <exception>
#include <iostream>
#include <stdexcept>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "langprop/pipeline.hpp"

namespace {

using namespace langprop;

std::string join_codes(const std::vector<Lang>& languages) {
  std::string joined;
  for (Lang lang : languages) {
    if (!joined.empty()) joined += ' ';
    joined += to_code(lang);
  }
  return joined;
}

void report_train(const TrainContentOutcome& outcome) {
  std::cout << "trained " << outcome.languages.size() << " languages ("
            << join_codes(outcome.languages) << ") over " << outcome.features
            << " features\n";
  for (const std::string& warning : outcome.warnings) {
    std::cerr << "warning: " << warning << '\n';
  }
  if (outcome.dev_accuracy) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "dev accuracy: %.2f%%\n", *outcome.dev_accuracy * 100.0);
    std::cout << buf;
  }
}

void report_propagation(const PropagateOutcome& outcome, int max_iters) {
  std::cout << "converged=" << (outcome.converged ? "true" : "false")
            << " iterations=" << outcome.iterations << '\n';
  if (!outcome.converged) {
    std::cerr << "warning: propagation did not converge within " << max_iters
              << " iterations\n";
  }
}

int threads_or_default(int threads) {
  if (threads > 0) return threads;
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Language identification for short messages: character n-gram "
               "logistic regression combined with Modified Adsorption label "
               "propagation over a tweet-author-follower graph"};
  app.require_subcommand(1);
  app.set_config("--config", "",
                 "Config file with key=value lines ([subcommand] sections); "
                 "command-line flags take precedence");
  int threads = 0;
  app.add_option("--threads", threads,
                 "Worker threads (default: machine parallelism)");

  // train-content
  auto train_opts = std::make_shared<TrainContentOptions>();
  CLI::App* train = app.add_subcommand(
      "train-content", "Train the one-vs-rest character n-gram content model");
  train->fallthrough();
  train->add_option("--tweets", train_opts->tweets_path, "Labeled training tweets TSV")
      ->required()
      ->check(CLI::ExistingFile);
  train->add_option("--dev", train_opts->dev_path,
                    "Optional held-out split; prints content-only accuracy")
      ->check(CLI::ExistingFile);
  train->add_option("--model", train_opts->model_path, "Model output path")->required();
  train->add_option("--space", train_opts->space_path, "Feature-space output path")
      ->required();
  train->add_option("--reg-c", train_opts->train.reg_c, "Loss weight C")
      ->capture_default_str();
  train->add_option("--tol", train_opts->train.tol, "Gradient max-norm tolerance")
      ->capture_default_str();
  train->add_option("--max-iters", train_opts->train.max_iters, "Optimizer iteration cap")
      ->capture_default_str();
  train->add_flag("--ambiguous-positives,!--no-ambiguous-positives",
                  train_opts->train.ambiguous_as_positives,
                  "Treat ambiguous tweets as positives for every member language");
  train->add_option("--min-df", train_opts->min_df,
                    "Minimum document frequency for features")
      ->capture_default_str();
  train->callback([train_opts, &threads] {
    train_opts->threads = threads_or_default(threads);
    report_train(run_train_content(*train_opts));
  });

  // build-graph
  auto graph_opts = std::make_shared<BuildGraphOptions>();
  CLI::App* build = app.add_subcommand(
      "build-graph", "Build the tweet-author-follower graph and inject seeds");
  build->fallthrough();
  build->add_option("--train", graph_opts->train_path, "Labeled training tweets TSV")
      ->required()
      ->check(CLI::ExistingFile);
  build->add_option("--test", graph_opts->test_path, "Test tweets TSV")
      ->required()
      ->check(CLI::ExistingFile);
  build->add_option("--follows", graph_opts->follows_path, "Follower pairs TSV")
      ->check(CLI::ExistingFile);
  build->add_option("--graph", graph_opts->graph_path, "Graph output path")->required();
  build->add_option("--k-fraction", graph_opts->knn.k_fraction,
                    "Neighbors as a fraction of the corpus size")
      ->capture_default_str();
  build->add_option("--k-max", graph_opts->knn.k_max, "Hard cap on k");
  build->add_option("--tweet-user-weight", graph_opts->graph.tweet_user_weight,
                    "Tweet-author edge weight")
      ->capture_default_str();
  build->add_option("--user-user-weight", graph_opts->graph.user_user_weight,
                    "Follower edge weight")
      ->capture_default_str();
  build->add_option("--user-world-weight", graph_opts->graph.user_world_weight,
                    "User-world edge weight")
      ->capture_default_str();
  build->callback([graph_opts, &threads] {
    graph_opts->threads = threads_or_default(threads);
    const BuildGraphOutcome outcome = run_build_graph(*graph_opts);
    std::cout << outcome.nodes << " nodes, " << outcome.edges << " edges\n"
              << outcome.seeds << " seeded tweets\n";
  });

  // propagate
  auto prop_opts = std::make_shared<PropagateOptions>();
  CLI::App* prop = app.add_subcommand("propagate",
                                      "Run Modified Adsorption over a saved graph");
  prop->fallthrough();
  prop->add_option("--graph", prop_opts->graph_path, "Graph file")
      ->required()
      ->check(CLI::ExistingFile);
  prop->add_option("--output", prop_opts->output_path, "Per-node score dump path")
      ->required();
  prop->add_option("--mu1", prop_opts->mad.mu1, "Seed injection weight")
      ->capture_default_str();
  prop->add_option("--mu2", prop_opts->mad.mu2, "Neighbor agreement weight")
      ->capture_default_str();
  prop->add_option("--mu3", prop_opts->mad.mu3, "Abandonment regularization weight")
      ->capture_default_str();
  prop->add_option("--beta", prop_opts->mad.beta, "Walk-probability base")
      ->capture_default_str();
  prop->add_option("--max-iters", prop_opts->mad.max_iters, "Jacobi sweep cap")
      ->capture_default_str();
  prop->add_option("--tol", prop_opts->mad.tol, "Max per-entry change tolerance")
      ->capture_default_str();
  prop->callback([prop_opts, &threads] {
    prop_opts->threads = threads_or_default(threads);
    report_propagation(run_propagate(*prop_opts), prop_opts->mad.max_iters);
  });

  // predict
  auto predict_opts = std::make_shared<PredictOptions>();
  CLI::App* predict = app.add_subcommand(
      "predict", "Combine content and social scores and decide labels");
  predict->fallthrough();
  predict->add_option("--tweets", predict_opts->tweets_path, "Tweets to label")
      ->required()
      ->check(CLI::ExistingFile);
  predict->add_option("--model", predict_opts->model_path, "Trained content model")
      ->required()
      ->check(CLI::ExistingFile);
  predict->add_option("--space", predict_opts->space_path, "Feature space")
      ->required()
      ->check(CLI::ExistingFile);
  predict->add_option("--propagation", predict_opts->propagation_path,
                      "Propagation dump (required unless --lambda2 0)")
      ->check(CLI::ExistingFile);
  predict->add_option("--output", predict_opts->output_path, "Predictions output path")
      ->required();
  predict->add_option("--lambda1", predict_opts->hybrid.lambda1, "Content score weight")
      ->capture_default_str();
  predict->add_option("--lambda2", predict_opts->hybrid.lambda2, "Social score weight")
      ->capture_default_str();
  predict->add_option("--und-threshold", predict_opts->hybrid.und_threshold,
                      "Emit und when the best score falls below this (0 disables)")
      ->capture_default_str();
  predict->callback([predict_opts] {
    const PredictOutcome outcome = run_predict(*predict_opts);
    std::cout << "wrote " << outcome.predictions << " predictions\n";
  });

  // evaluate
  auto eval_opts = std::make_shared<EvaluateOptions>();
  CLI::App* evaluate = app.add_subcommand(
      "evaluate", "Score predictions against gold labels (per-category P/R/F)");
  evaluate->fallthrough();
  evaluate->add_option("--gold", eval_opts->gold_path, "Gold tweets TSV")
      ->required()
      ->check(CLI::ExistingFile);
  evaluate->add_option("--predictions", eval_opts->predictions_path, "Predictions TSV")
      ->required()
      ->check(CLI::ExistingFile);
  evaluate->add_option("--report", eval_opts->report_path, "Machine-readable TSV output");
  evaluate->callback([eval_opts] {
    const EvaluationReport report = run_evaluate(*eval_opts);
    write_report_table(std::cout, report);
  });

  // synth
  auto synth_opts = std::make_shared<SynthOptions>();
  CLI::App* synth = app.add_subcommand(
      "synth", "Generate a deterministic two-language community benchmark");
  synth->fallthrough();
  synth->add_option("--seed", synth_opts->synth.seed, "Generator seed")
      ->capture_default_str();
  synth->add_option("--train-tweets", synth_opts->synth.n_train, "Training tweets")
      ->capture_default_str();
  synth->add_option("--test-tweets", synth_opts->synth.n_test, "Test tweets")
      ->capture_default_str();
  synth->add_option("--overlap", synth_opts->synth.overlap,
                    "Shared fraction of each language's vocabulary")
      ->capture_default_str();
  synth->add_option("--users", synth_opts->synth.users, "User count (two communities)")
      ->capture_default_str();
  synth->add_option("--monolinguality", synth_opts->synth.monolinguality,
                    "P(user speaks its community language)")
      ->capture_default_str();
  synth->add_option("--p-intra", synth_opts->synth.p_intra,
                    "Follow probability within a community")
      ->capture_default_str();
  synth->add_option("--p-inter", synth_opts->synth.p_inter,
                    "Follow probability across communities")
      ->capture_default_str();
  synth->add_option("--vocab-size", synth_opts->synth.vocab_size, "Words per language")
      ->capture_default_str();
  synth->add_option("--words-min", synth_opts->synth.words_min, "Min words per tweet")
      ->capture_default_str();
  synth->add_option("--words-max", synth_opts->synth.words_max, "Max words per tweet")
      ->capture_default_str();
  synth->add_option("--word-len-min", synth_opts->synth.word_len_min, "Min word length")
      ->capture_default_str();
  synth->add_option("--word-len-max", synth_opts->synth.word_len_max, "Max word length")
      ->capture_default_str();
  synth->add_option("--out-train", synth_opts->train_path, "Training tweets output")
      ->required();
  synth->add_option("--out-test", synth_opts->test_path, "Test tweets output")
      ->required();
  synth->add_option("--out-follows", synth_opts->follows_path, "Follow pairs output")
      ->required();
  synth->callback([synth_opts] {
    const SynthOutcome outcome = run_synth(*synth_opts);
    std::cout << "wrote " << outcome.train << " train tweets, " << outcome.test
              << " test tweets, " << outcome.follows << " follow pairs\n";
  });

  // run-all
  auto all_opts = std::make_shared<RunAllOptions>();
  CLI::App* all = app.add_subcommand(
      "run-all", "train-content, build-graph, propagate, predict and evaluate");
  all->fallthrough();
  all->add_option("--train", all_opts->train_path, "Labeled training tweets TSV")
      ->required()
      ->check(CLI::ExistingFile);
  all->add_option("--test", all_opts->test_path, "Test tweets TSV (gold used to score)")
      ->required()
      ->check(CLI::ExistingFile);
  all->add_option("--follows", all_opts->follows_path, "Follower pairs TSV")
      ->check(CLI::ExistingFile);
  all->add_option("--out-dir", all_opts->out_dir, "Directory for all stage outputs")
      ->required();
  all->add_option("--reg-c", all_opts->train.reg_c, "Loss weight C")->capture_default_str();
  all->add_option("--min-df", all_opts->min_df, "Minimum document frequency")
      ->capture_default_str();
  all->add_option("--k-fraction", all_opts->knn.k_fraction,
                  "Neighbors as a fraction of the corpus size")
      ->capture_default_str();
  all->add_option("--k-max", all_opts->knn.k_max, "Hard cap on k");
  all->add_option("--tweet-user-weight", all_opts->graph.tweet_user_weight,
                  "Tweet-author edge weight")
      ->capture_default_str();
  all->add_option("--user-user-weight", all_opts->graph.user_user_weight,
                  "Follower edge weight")
      ->capture_default_str();
  all->add_option("--user-world-weight", all_opts->graph.user_world_weight,
                  "User-world edge weight")
      ->capture_default_str();
  all->add_option("--mu1", all_opts->mad.mu1, "Seed injection weight")
      ->capture_default_str();
  all->add_option("--mu2", all_opts->mad.mu2, "Neighbor agreement weight")
      ->capture_default_str();
  all->add_option("--mu3", all_opts->mad.mu3, "Abandonment regularization weight")
      ->capture_default_str();
  all->add_option("--beta", all_opts->mad.beta, "Walk-probability base")
      ->capture_default_str();
  all->add_option("--mad-max-iters", all_opts->mad.max_iters, "Jacobi sweep cap")
      ->capture_default_str();
  all->add_option("--mad-tol", all_opts->mad.tol, "Propagation tolerance")
      ->capture_default_str();
  all->add_option("--lambda1", all_opts->hybrid.lambda1, "Content score weight")
      ->capture_default_str();
  all->add_option("--lambda2", all_opts->hybrid.lambda2, "Social score weight")
      ->capture_default_str();
  all->add_option("--und-threshold", all_opts->hybrid.und_threshold,
                  "Emit und below this combined score (0 disables)")
      ->capture_default_str();
  all->callback([all_opts, &threads] {
    all_opts->threads = threads_or_default(threads);
    const RunAllOutcome outcome = run_all(*all_opts);
    report_train(outcome.train);
    std::cout << outcome.graph.nodes << " nodes, " << outcome.graph.edges << " edges\n";
    report_propagation(outcome.propagation, all_opts->mad.max_iters);
    std::cout << "wrote " << outcome.predictions.predictions << " predictions to "
              << outcome.predictions_path << '\n';
    write_report_table(std::cout, outcome.report);
  });

  try {
    app.parse(argc, argv);
    return 0;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const langprop::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const langprop::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 1;
  }
}
