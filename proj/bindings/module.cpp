#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "langprop/features.hpp"
#include "langprop/pipeline.hpp"

namespace py = pybind11;
using namespace langprop;

namespace {

py::dict report_to_dict(const EvaluationReport& report) {
  py::dict out;
  for (std::size_t c = 0; c < kNumCategories; ++c) {
    const CategoryMetrics& cat = report.categories[c];
    py::dict row;
    row["precision"] = cat.precision;
    row["recall"] = cat.recall;
    row["f1"] = cat.f1;
    row["tp"] = cat.tp;
    row["fp"] = cat.fp;
    row["fn"] = cat.fn;
    out[py::str(std::string(category_name(c)))] = row;
  }
  py::dict avg;
  avg["precision"] = report.macro.precision;
  avg["recall"] = report.macro.recall;
  avg["f1"] = report.macro.f1;
  out["avg"] = avg;
  return out;
}

std::vector<std::string> codes_of(const std::vector<Lang>& languages) {
  std::vector<std::string> codes;
  codes.reserve(languages.size());
  for (Lang lang : languages) codes.emplace_back(to_code(lang));
  return codes;
}

}  // namespace

PYBIND11_MODULE(_langprop, m) {
  m.doc() = "Language identification: character n-gram logistic regression plus "
            "Modified Adsorption label propagation over a social graph";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);

  m.def(
      "char_ngrams",
      [](const std::string& text, int n_min, int n_max) {
        return char_ngrams(text, n_min, n_max);
      },
      py::arg("text"), py::arg("n_min") = 2, py::arg("n_max") = 5,
      "Within-word character n-grams of a text (UTF-8 aware)");

  m.def(
      "train_content",
      [](const std::string& tweets, const std::string& model, const std::string& space,
         const std::string& dev, double reg_c, double tol, int max_iters, int min_df,
         int threads) {
        TrainContentOptions opts;
        opts.tweets_path = tweets;
        opts.dev_path = dev;
        opts.model_path = model;
        opts.space_path = space;
        opts.train.reg_c = reg_c;
        opts.train.tol = tol;
        opts.train.max_iters = max_iters;
        opts.min_df = min_df;
        opts.threads = threads;
        const TrainContentOutcome outcome = run_train_content(opts);
        py::dict out;
        out["features"] = outcome.features;
        out["languages"] = codes_of(outcome.languages);
        out["warnings"] = outcome.warnings;
        if (outcome.dev_accuracy) out["dev_accuracy"] = *outcome.dev_accuracy;
        return out;
      },
      py::arg("tweets"), py::arg("model"), py::arg("space"), py::arg("dev") = "",
      py::arg("reg_c") = 1.0, py::arg("tol") = 1e-6, py::arg("max_iters") = 500,
      py::arg("min_df") = 1, py::arg("threads") = 1,
      "Train the content model; writes the model and feature-space files");

  m.def(
      "build_graph",
      [](const std::string& train, const std::string& test, const std::string& graph,
         const std::string& follows, double k_fraction, std::optional<int> k_max,
         double tweet_user_weight, double user_user_weight, double user_world_weight,
         int threads) {
        BuildGraphOptions opts;
        opts.train_path = train;
        opts.test_path = test;
        opts.follows_path = follows;
        opts.graph_path = graph;
        opts.knn.k_fraction = k_fraction;
        opts.knn.k_max = k_max;
        opts.graph.tweet_user_weight = tweet_user_weight;
        opts.graph.user_user_weight = user_user_weight;
        opts.graph.user_world_weight = user_world_weight;
        opts.threads = threads;
        const BuildGraphOutcome outcome = run_build_graph(opts);
        py::dict out;
        out["nodes"] = outcome.nodes;
        out["edges"] = outcome.edges;
        out["seeds"] = outcome.seeds;
        return out;
      },
      py::arg("train"), py::arg("test"), py::arg("graph"), py::arg("follows") = "",
      py::arg("k_fraction") = 0.25, py::arg("k_max") = std::nullopt,
      py::arg("tweet_user_weight") = 100.0, py::arg("user_user_weight") = 1.0,
      py::arg("user_world_weight") = 0.001, py::arg("threads") = 1,
      "Build the tweet-author-follower graph and inject training seeds");

  m.def(
      "propagate",
      [](const std::string& graph, const std::string& output, double mu1, double mu2,
         double mu3, double beta, int max_iters, double tol, int threads) {
        PropagateOptions opts;
        opts.graph_path = graph;
        opts.output_path = output;
        opts.mad = {mu1, mu2, mu3, beta, max_iters, tol};
        opts.threads = threads;
        const PropagateOutcome outcome = run_propagate(opts);
        py::dict out;
        out["iterations"] = outcome.iterations;
        out["converged"] = outcome.converged;
        return out;
      },
      py::arg("graph"), py::arg("output"), py::arg("mu1") = 1.0, py::arg("mu2") = 0.01,
      py::arg("mu3") = 0.01, py::arg("beta") = 2.0, py::arg("max_iters") = 100,
      py::arg("tol") = 1e-6, py::arg("threads") = 1,
      "Run Modified Adsorption over a saved graph and dump per-node scores");

  m.def(
      "mad_propagate",
      [](const Adjacency& adjacency, const std::vector<std::vector<double>>& seeds,
         std::size_t num_labels, double mu1, double mu2, double mu3, double beta,
         int max_iters, double tol) {
        const MadResult result =
            propagate(adjacency, seeds, num_labels, {mu1, mu2, mu3, beta, max_iters, tol});
        py::dict out;
        out["scores"] = result.scores;
        out["iterations"] = result.iterations;
        out["converged"] = result.converged;
        return out;
      },
      py::arg("adjacency"), py::arg("seeds"), py::arg("num_labels"), py::arg("mu1") = 1.0,
      py::arg("mu2") = 0.01, py::arg("mu3") = 0.01, py::arg("beta") = 2.0,
      py::arg("max_iters") = 100, py::arg("tol") = 1e-6,
      "Modified Adsorption on a raw symmetric adjacency list; returns per-node "
      "scores with the dummy label last");

  m.def(
      "predict",
      [](const std::string& tweets, const std::string& model, const std::string& space,
         const std::string& output, const std::string& propagation, double lambda1,
         double lambda2, double und_threshold) {
        PredictOptions opts;
        opts.tweets_path = tweets;
        opts.model_path = model;
        opts.space_path = space;
        opts.propagation_path = propagation;
        opts.output_path = output;
        opts.hybrid = {lambda1, lambda2, und_threshold};
        return run_predict(opts).predictions;
      },
      py::arg("tweets"), py::arg("model"), py::arg("space"), py::arg("output"),
      py::arg("propagation") = "", py::arg("lambda1") = 0.5, py::arg("lambda2") = 0.5,
      py::arg("und_threshold") = 0.0,
      "Combine content and social scores and write per-tweet decisions");

  m.def(
      "evaluate",
      [](const std::string& gold, const std::string& predictions,
         const std::string& report) {
        return report_to_dict(run_evaluate({gold, predictions, report}));
      },
      py::arg("gold"), py::arg("predictions"), py::arg("report") = "",
      "Score predictions against gold labels; returns per-category P/R/F");

  m.def(
      "synth",
      [](const std::string& out_train, const std::string& out_test,
         const std::string& out_follows, std::uint64_t seed, int n_train, int n_test,
         double overlap, int users, double monolinguality, double p_intra,
         double p_inter, int vocab_size, int words_min, int words_max) {
        SynthOptions opts;
        opts.train_path = out_train;
        opts.test_path = out_test;
        opts.follows_path = out_follows;
        opts.synth.seed = seed;
        opts.synth.n_train = n_train;
        opts.synth.n_test = n_test;
        opts.synth.overlap = overlap;
        opts.synth.users = users;
        opts.synth.monolinguality = monolinguality;
        opts.synth.p_intra = p_intra;
        opts.synth.p_inter = p_inter;
        opts.synth.vocab_size = vocab_size;
        opts.synth.words_min = words_min;
        opts.synth.words_max = words_max;
        const SynthOutcome outcome = run_synth(opts);
        py::dict out;
        out["train"] = outcome.train;
        out["test"] = outcome.test;
        out["follows"] = outcome.follows;
        return out;
      },
      py::arg("out_train"), py::arg("out_test"), py::arg("out_follows"),
      py::arg("seed") = 1, py::arg("n_train") = 400, py::arg("n_test") = 400,
      py::arg("overlap") = 0.5, py::arg("users") = 100, py::arg("monolinguality") = 0.9,
      py::arg("p_intra") = 0.2, py::arg("p_inter") = 0.02, py::arg("vocab_size") = 200,
      py::arg("words_min") = 5, py::arg("words_max") = 12,
      "Generate the deterministic two-language community benchmark");

  m.def(
      "run_all",
      [](const std::string& train, const std::string& test, const std::string& out_dir,
         const std::string& follows, double reg_c, int min_df, double k_fraction,
         double lambda1, double lambda2, int threads) {
        RunAllOptions opts;
        opts.train_path = train;
        opts.test_path = test;
        opts.follows_path = follows;
        opts.out_dir = out_dir;
        opts.train.reg_c = reg_c;
        opts.min_df = min_df;
        opts.knn.k_fraction = k_fraction;
        opts.hybrid.lambda1 = lambda1;
        opts.hybrid.lambda2 = lambda2;
        opts.threads = threads;
        const RunAllOutcome outcome = run_all(opts);
        py::dict out;
        out["report"] = report_to_dict(outcome.report);
        out["predictions_path"] = outcome.predictions_path;
        out["report_path"] = outcome.report_path;
        out["iterations"] = outcome.propagation.iterations;
        out["converged"] = outcome.propagation.converged;
        return out;
      },
      py::arg("train"), py::arg("test"), py::arg("out_dir"), py::arg("follows") = "",
      py::arg("reg_c") = 1.0, py::arg("min_df") = 1, py::arg("k_fraction") = 0.25,
      py::arg("lambda1") = 0.5, py::arg("lambda2") = 0.5, py::arg("threads") = 1,
      "Full pipeline: train, build graph, propagate, predict, evaluate");
}
