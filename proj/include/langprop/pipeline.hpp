#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "langprop/content_model.hpp"
#include "langprop/eval.hpp"
#include "langprop/graph.hpp"
#include "langprop/hybrid.hpp"
#include "langprop/knn.hpp"
#include "langprop/propagation.hpp"
#include "langprop/synth.hpp"

namespace langprop {

/// File-driven pipeline stages shared by the CLI subcommands, `run-all`, and
/// the bindings. Each stage reads and writes only through its declared paths,
/// so chaining stages is byte-identical to running them individually.

struct TrainContentOptions {
  std::string tweets_path;
  std::string dev_path;  // optional held-out split
  std::string model_path;
  std::string space_path;
  TrainConfig train;
  int min_df = 1;
  int threads = 1;
};

struct TrainContentOutcome {
  std::size_t features = 0;
  std::vector<Lang> languages;
  std::optional<double> dev_accuracy;
  std::vector<std::string> warnings;
};

TrainContentOutcome run_train_content(const TrainContentOptions& opts);

struct BuildGraphOptions {
  std::string train_path;
  std::string test_path;
  std::string follows_path;
  std::string graph_path;
  KnnConfig knn;
  GraphConfig graph;
  int threads = 1;
};

struct BuildGraphOutcome {
  std::size_t nodes = 0;
  std::size_t edges = 0;
  std::size_t seeds = 0;
};

BuildGraphOutcome run_build_graph(const BuildGraphOptions& opts);

struct PropagateOptions {
  std::string graph_path;
  std::string output_path;
  MadConfig mad;
  int threads = 1;
};

struct PropagateOutcome {
  int iterations = 0;
  bool converged = false;
};

PropagateOutcome run_propagate(const PropagateOptions& opts);

struct PredictOptions {
  std::string tweets_path;
  std::string model_path;
  std::string space_path;
  std::string propagation_path;  // optional when lambda2 == 0
  std::string output_path;
  HybridConfig hybrid;
};

struct PredictOutcome {
  std::size_t predictions = 0;
};

PredictOutcome run_predict(const PredictOptions& opts);

struct EvaluateOptions {
  std::string gold_path;
  std::string predictions_path;
  std::string report_path;  // optional TSV output
};

EvaluationReport run_evaluate(const EvaluateOptions& opts);

struct SynthOptions {
  SynthConfig synth;
  std::string train_path;
  std::string test_path;
  std::string follows_path;
};

struct SynthOutcome {
  std::size_t train = 0;
  std::size_t test = 0;
  std::size_t follows = 0;
};

SynthOutcome run_synth(const SynthOptions& opts);

struct RunAllOptions {
  std::string train_path;
  std::string test_path;
  std::string follows_path;
  std::string out_dir;
  TrainConfig train;
  int min_df = 1;
  KnnConfig knn;
  GraphConfig graph;
  MadConfig mad;
  HybridConfig hybrid;
  int threads = 1;
};

struct RunAllOutcome {
  TrainContentOutcome train;
  BuildGraphOutcome graph;
  PropagateOutcome propagation;
  PredictOutcome predictions;
  EvaluationReport report;
  std::string predictions_path;
  std::string report_path;
};

RunAllOutcome run_all(const RunAllOptions& opts);

}  // namespace langprop
