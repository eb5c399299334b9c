#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "langprop/corpus.hpp"
#include "langprop/features.hpp"
#include "langprop/labels.hpp"

namespace langprop {

struct TrainConfig {
  double reg_c = 1.0;   // inverse-regularization weight on the loss term
  double tol = 1e-6;    // max-norm gradient tolerance
  int max_iters = 500;
  // Ambiguous-gold tweets count as a positive for each member language.
  bool ambiguous_as_positives = true;

  void validate() const;
};

/// Binary L2-regularized logistic regression objective
///   f(w, b) = 0.5*||w||^2 + C * sum_i log(1 + exp(-y_i (w.x_i + b)))
/// over sparse examples with labels y in {-1, +1}. The bias is not
/// regularized.
class LogisticObjective {
 public:
  LogisticObjective(std::vector<const SparseVector*> examples, std::vector<int> labels,
                    double reg_c, std::size_t dim);

  std::size_t dim() const { return dim_; }
  double value(const std::vector<double>& weights, double bias) const;
  /// Analytic gradient; grad_weights is resized to dim.
  void gradient(const std::vector<double>& weights, double bias,
                std::vector<double>* grad_weights, double* grad_bias) const;

 private:
  std::vector<const SparseVector*> examples_;
  std::vector<int> labels_;
  double reg_c_;
  std::size_t dim_;
};

struct OptimizeResult {
  std::vector<double> weights;
  double bias = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Deterministic L-BFGS with Armijo backtracking; the objective value never
/// increases between iterations. Returns the best iterate when the
/// iteration cap is hit.
OptimizeResult minimize_logistic(const LogisticObjective& objective, double tol,
                                 int max_iters,
                                 const std::function<void(int, double)>& on_iteration = {});

/// One-vs-rest classifier over character n-gram vectors. Holds one weight
/// vector and bias per trained language; languages absent from training
/// score zero.
class ContentModel {
 public:
  /// Trains one binary problem per language present in the training gold
  /// (or per `languages` when non-empty; a requested language without a
  /// positive example is an error). Undecided tweets are excluded.
  static ContentModel train(const std::vector<Tweet>& tweets, const FeatureSpace& space,
                            const TrainConfig& cfg = {},
                            std::vector<Lang> languages = {},
                            std::vector<std::string>* warnings = nullptr,
                            int threads = 1,
                            const std::function<void(Lang, int, double)>& on_iteration = {});

  const std::vector<Lang>& languages() const { return languages_; }
  std::size_t dim() const { return dim_; }
  double reg_c() const { return reg_c_; }
  const std::vector<double>& weights(Lang lang) const;
  double bias(Lang lang) const;

  /// Per-language sigmoid scores for a feature vector; untrained languages
  /// stay 0.
  LabelDistribution predict_scores(const SparseVector& vec) const;
  /// Convenience: vectorizes char 2-5-grams of the text first.
  LabelDistribution predict_scores(std::string_view text, const FeatureSpace& space) const;

  void save(std::ostream& out) const;
  static ContentModel load(std::istream& in, std::string_view source = "model");
  void save_file(const std::string& path) const;
  static ContentModel load_file(const std::string& path);

 private:
  std::vector<Lang> languages_;
  std::vector<std::vector<double>> weights_;  // parallel to languages_
  std::vector<double> biases_;
  double reg_c_ = 1.0;
  std::size_t dim_ = 0;
};

/// Divide-by-sum normalization of raw per-language scores; an all-zero input
/// becomes uniform. Entries must be non-negative.
LabelDistribution normalize(const LabelDistribution& scores);

}  // namespace langprop
