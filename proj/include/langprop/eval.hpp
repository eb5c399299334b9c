#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "langprop/corpus.hpp"
#include "langprop/errors.hpp"
#include "langprop/hybrid.hpp"
#include "langprop/labels.hpp"

namespace langprop {

/// Scoring categories: the six languages plus amb and und.
inline constexpr std::size_t kNumCategories = kNumLangs + 2;
inline constexpr std::size_t kAmbCategory = kNumLangs;
inline constexpr std::size_t kUndCategory = kNumLangs + 1;

std::string_view category_name(std::size_t category);

struct CategoryMetrics {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;
  double precision = 0.0;  // percentages
  double recall = 0.0;
  double f1 = 0.0;

  bool attested() const { return tp + fp + fn > 0; }
};

struct MetricRow {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct EvaluationReport {
  std::array<CategoryMetrics, kNumCategories> categories;
  MetricRow macro;        // over attested categories
  std::size_t scored = 0; // number of gold tweets
};

/// Harmonic mean of two percentages; 0 when both are 0.
double f_score(double p, double r);

/// Unweighted column means.
MetricRow macro_average(const std::vector<MetricRow>& rows);

/// Scores predictions against gold labels. Requires a bijection between gold
/// tweet ids and prediction ids; offenders are listed in the error message.
EvaluationReport score_predictions(const std::vector<Tweet>& gold,
                                   const std::vector<Prediction>& predictions);

/// Aligned human-readable table (per-category P/R/F plus the avg row).
void write_report_table(std::ostream& out, const EvaluationReport& report);

/// Machine-readable rows: category, P, R, F (two decimals), avg row last.
void write_report_tsv(std::ostream& out, const EvaluationReport& report);
void write_report_tsv_file(const std::string& path, const EvaluationReport& report);

}  // namespace langprop
