#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "langprop/errors.hpp"
#include "langprop/labels.hpp"

namespace langprop {

struct HybridConfig {
  double lambda1 = 0.5;
  double lambda2 = 0.5;
  double und_threshold = 0.0;  // 0 disables und output

  void validate() const;
};

/// score(l) = lambda1 * content(l) + lambda2 * social(l)
LabelDistribution combine(const LabelDistribution& content,
                          const LabelDistribution& social, const HybridConfig& cfg);

/// Argmax over the combined scores, ties broken by the fixed language order
/// (es, pt, ca, en, gl, eu). Returns nullopt (und) when the best score falls
/// below the threshold.
std::optional<Lang> decide(const LabelDistribution& scores, const HybridConfig& cfg);

struct Prediction {
  std::string tweet_id;
  std::optional<Lang> label;  // nullopt = und
  LabelDistribution scores;
};

/// Formats a predicted label ("und" for nullopt).
std::string format_predicted_label(const std::optional<Lang>& label);

/// TSV: tweet_id, predicted label, lang:score pairs sorted by descending
/// score (six decimals).
void write_predictions(std::ostream& out, const std::vector<Prediction>& predictions);
void write_predictions_file(const std::string& path,
                            const std::vector<Prediction>& predictions);

std::vector<Prediction> load_predictions(std::istream& in,
                                         std::string_view source = "<predictions>");
std::vector<Prediction> load_predictions_file(const std::string& path);

}  // namespace langprop
