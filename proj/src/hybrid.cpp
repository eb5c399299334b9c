#include "langprop/hybrid.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_set>

namespace langprop {

void HybridConfig::validate() const {
  if (lambda1 < 0.0 || lambda2 < 0.0) {
    throw ValidationError("lambda1 and lambda2 must be non-negative");
  }
  if (lambda1 == 0.0 && lambda2 == 0.0) {
    throw ValidationError("lambda1 and lambda2 cannot both be zero");
  }
  if (und_threshold < 0.0 || und_threshold >= 1.0) {
    throw ValidationError("und_threshold must lie in [0, 1)");
  }
}

LabelDistribution combine(const LabelDistribution& content,
                          const LabelDistribution& social, const HybridConfig& cfg) {
  cfg.validate();
  LabelDistribution out;
  for (Lang lang : kAllLangs) {
    out[lang] = cfg.lambda1 * content[lang] + cfg.lambda2 * social[lang];
  }
  return out;
}

std::optional<Lang> decide(const LabelDistribution& scores, const HybridConfig& cfg) {
  cfg.validate();
  Lang best = Lang::Es;
  for (Lang lang : kAllLangs) {
    if (scores[lang] > scores[best]) best = lang;
  }
  if (cfg.und_threshold > 0.0 && scores[best] < cfg.und_threshold) return std::nullopt;
  return best;
}

std::string format_predicted_label(const std::optional<Lang>& label) {
  return label ? std::string(to_code(*label)) : "und";
}

namespace {

std::vector<std::string_view> split_on(std::string_view line, char sep) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

}  // namespace

void write_predictions(std::ostream& out, const std::vector<Prediction>& predictions) {
  char buf[40];
  for (const Prediction& pred : predictions) {
    out << pred.tweet_id << '\t' << format_predicted_label(pred.label) << '\t';
    std::array<Lang, kNumLangs> order = kAllLangs;
    std::stable_sort(order.begin(), order.end(), [&](Lang a, Lang b) {
      return pred.scores[a] > pred.scores[b];
    });
    for (std::size_t i = 0; i < order.size(); ++i) {
      if (i != 0) out << ',';
      out << to_code(order[i]);
      std::snprintf(buf, sizeof buf, ":%.6f", pred.scores[order[i]]);
      out << buf;
    }
    out << '\n';
  }
}

void write_predictions_file(const std::string& path,
                            const std::vector<Prediction>& predictions) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write predictions file '" + path + "'");
  write_predictions(out, predictions);
}

std::vector<Prediction> load_predictions(std::istream& in, std::string_view source) {
  const std::string src(source);
  std::vector<Prediction> predictions;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::string context = src + ":" + std::to_string(line_no) + ": ";
    auto fields = split_on(line, '\t');
    if (fields.size() != 3) {
      throw ParseError(context + "expected 'tweet_id<TAB>label<TAB>lang:score,...'");
    }
    if (fields[0].empty()) throw ParseError(context + "empty tweet id");
    if (!seen.emplace(std::string(fields[0])).second) {
      throw ParseError(context + "duplicate tweet '" + std::string(fields[0]) + "'");
    }

    Prediction pred;
    pred.tweet_id = std::string(fields[0]);
    if (fields[1] == "und") {
      pred.label = std::nullopt;
    } else {
      auto lang = lang_from_code(fields[1]);
      if (!lang) {
        throw ParseError(context + "unknown predicted label '" + std::string(fields[1]) + "'");
      }
      pred.label = lang;
    }
    for (std::string_view part : split_on(fields[2], ',')) {
      auto sep = part.find(':');
      if (sep == std::string_view::npos) throw ParseError(context + "expected 'lang:score'");
      auto lang = lang_from_code(part.substr(0, sep));
      if (!lang) {
        throw ParseError(context + "unknown language code '" +
                         std::string(part.substr(0, sep)) + "'");
      }
      const std::string_view score_text = part.substr(sep + 1);
      double score = 0.0;
      auto [ptr, ec] = std::from_chars(score_text.data(),
                                       score_text.data() + score_text.size(), score);
      if (ec != std::errc() || ptr != score_text.data() + score_text.size()) {
        throw ParseError(context + "bad score '" + std::string(score_text) + "'");
      }
      pred.scores[*lang] = score;
    }
    predictions.push_back(std::move(pred));
  }
  return predictions;
}

std::vector<Prediction> load_predictions_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open predictions file '" + path + "'");
  return load_predictions(in, path);
}

}  // namespace langprop
