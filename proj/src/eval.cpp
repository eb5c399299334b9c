#include "langprop/eval.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <unordered_map>

namespace langprop {

std::string_view category_name(std::size_t category) {
  if (category < kNumLangs) return to_code(kAllLangs[category]);
  if (category == kAmbCategory) return "amb";
  if (category == kUndCategory) return "und";
  throw ValidationError("category index out of range");
}

double f_score(double p, double r) {
  if (p < 0.0 || p > 100.0 || r < 0.0 || r > 100.0) {
    throw ValidationError("precision and recall must lie in [0, 100]");
  }
  const double denom = p + r;
  if (denom == 0.0) return 0.0;
  return 2.0 * p * r / denom;
}

MetricRow macro_average(const std::vector<MetricRow>& rows) {
  if (rows.empty()) throw ValidationError("macro average of zero rows");
  MetricRow avg;
  for (const MetricRow& row : rows) {
    avg.precision += row.precision;
    avg.recall += row.recall;
    avg.f1 += row.f1;
  }
  const auto n = static_cast<double>(rows.size());
  avg.precision /= n;
  avg.recall /= n;
  avg.f1 /= n;
  return avg;
}

namespace {

std::size_t predicted_category(const std::optional<Lang>& label) {
  return label ? static_cast<std::size_t>(*label) : kUndCategory;
}

std::string join_ids(const std::vector<std::string>& ids) {
  std::string joined;
  const std::size_t shown = std::min<std::size_t>(ids.size(), 10);
  for (std::size_t i = 0; i < shown; ++i) {
    if (i != 0) joined += ", ";
    joined += '\'' + ids[i] + '\'';
  }
  if (ids.size() > shown) {
    joined += ", ... (" + std::to_string(ids.size()) + " total)";
  }
  return joined;
}

}  // namespace

EvaluationReport score_predictions(const std::vector<Tweet>& gold,
                                   const std::vector<Prediction>& predictions) {
  if (gold.empty()) throw ValidationError("no gold tweets to score");

  std::unordered_map<std::string_view, const Prediction*> by_id;
  std::vector<std::string> duplicates;
  for (const Prediction& pred : predictions) {
    if (!by_id.emplace(pred.tweet_id, &pred).second) duplicates.push_back(pred.tweet_id);
  }
  if (!duplicates.empty()) {
    throw ValidationError("duplicate predictions for " + join_ids(duplicates));
  }

  EvaluationReport report;
  std::vector<std::string> missing;
  std::unordered_map<std::string_view, bool> gold_seen;
  for (const Tweet& tweet : gold) {
    if (!tweet.gold) {
      throw ValidationError("tweet '" + tweet.id + "' has no gold label");
    }
    gold_seen.emplace(tweet.id, true);
    auto it = by_id.find(tweet.id);
    if (it == by_id.end()) {
      missing.push_back(tweet.id);
      continue;
    }
    const Prediction& pred = *it->second;
    const GoldLabel& label = *tweet.gold;
    ++report.scored;

    switch (label.kind()) {
      case GoldLabel::Kind::Single: {
        const auto cat = static_cast<std::size_t>(label.members().front());
        if (pred.label && *pred.label == label.members().front()) {
          ++report.categories[cat].tp;
        } else {
          ++report.categories[cat].fn;
          ++report.categories[predicted_category(pred.label)].fp;
        }
        break;
      }
      case GoldLabel::Kind::Ambiguous: {
        if (pred.label && label.contains(*pred.label)) {
          ++report.categories[kAmbCategory].tp;
        } else {
          ++report.categories[kAmbCategory].fn;
          ++report.categories[predicted_category(pred.label)].fp;
        }
        break;
      }
      case GoldLabel::Kind::Undecided: {
        if (!pred.label) {
          ++report.categories[kUndCategory].tp;
        } else {
          ++report.categories[kUndCategory].fn;
          ++report.categories[predicted_category(pred.label)].fp;
        }
        break;
      }
    }
  }
  if (!missing.empty()) {
    throw ValidationError("missing predictions for " + join_ids(missing));
  }
  std::vector<std::string> unknown;
  for (const Prediction& pred : predictions) {
    if (!gold_seen.contains(pred.tweet_id)) unknown.push_back(pred.tweet_id);
  }
  if (!unknown.empty()) {
    throw ValidationError("predictions for unknown tweets " + join_ids(unknown));
  }

  std::vector<MetricRow> attested_rows;
  for (CategoryMetrics& cat : report.categories) {
    const double tp = static_cast<double>(cat.tp);
    cat.precision = cat.tp + cat.fp == 0 ? 0.0 : 100.0 * tp / static_cast<double>(cat.tp + cat.fp);
    cat.recall = cat.tp + cat.fn == 0 ? 0.0 : 100.0 * tp / static_cast<double>(cat.tp + cat.fn);
    cat.f1 = f_score(cat.precision, cat.recall);
    if (cat.attested()) attested_rows.push_back({cat.precision, cat.recall, cat.f1});
  }
  // Macro over attested categories: on full eight-category data this is the
  // plain eight-row mean; categories absent from both gold and predictions do
  // not drag the average to zero.
  report.macro = macro_average(attested_rows);
  return report;
}

void write_report_table(std::ostream& out, const EvaluationReport& report) {
  char buf[128];
  out << "category        P        R        F\n";
  auto print_row = [&](std::string_view name, double p, double r, double f) {
    std::snprintf(buf, sizeof buf, "%-8s %8.2f %8.2f %8.2f\n", std::string(name).c_str(),
                  p, r, f);
    out << buf;
  };
  for (std::size_t c = 0; c < kNumCategories; ++c) {
    const CategoryMetrics& cat = report.categories[c];
    print_row(category_name(c), cat.precision, cat.recall, cat.f1);
  }
  print_row("avg", report.macro.precision, report.macro.recall, report.macro.f1);
}

void write_report_tsv(std::ostream& out, const EvaluationReport& report) {
  char buf[128];
  auto print_row = [&](std::string_view name, double p, double r, double f) {
    std::snprintf(buf, sizeof buf, "%s\t%.2f\t%.2f\t%.2f\n",
                  std::string(name).c_str(), p, r, f);
    out << buf;
  };
  for (std::size_t c = 0; c < kNumCategories; ++c) {
    const CategoryMetrics& cat = report.categories[c];
    print_row(category_name(c), cat.precision, cat.recall, cat.f1);
  }
  print_row("avg", report.macro.precision, report.macro.recall, report.macro.f1);
}

void write_report_tsv_file(const std::string& path, const EvaluationReport& report) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write report file '" + path + "'");
  write_report_tsv(out, report);
}

}  // namespace langprop
