#include "langprop/content_model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <thread>

namespace langprop {

namespace {

double log1pexp(double t) {
  if (t > 0.0) return t + std::log1p(std::exp(-t));
  return std::log1p(std::exp(t));
}

double sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

double max_norm(const std::vector<double>& v, double extra) {
  double m = std::abs(extra);
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

void TrainConfig::validate() const {
  if (reg_c <= 0.0) throw ValidationError("reg_c must be positive");
  if (tol <= 0.0) throw ValidationError("tolerance must be positive");
  if (max_iters < 1) throw ValidationError("max_iters must be >= 1");
}

LogisticObjective::LogisticObjective(std::vector<const SparseVector*> examples,
                                     std::vector<int> labels, double reg_c,
                                     std::size_t dim)
    : examples_(std::move(examples)),
      labels_(std::move(labels)),
      reg_c_(reg_c),
      dim_(dim) {
  if (examples_.empty() || examples_.size() != labels_.size()) {
    throw ValidationError("objective needs a non-empty batch with one label per example");
  }
  for (int y : labels_) {
    if (y != 1 && y != -1) throw ValidationError("labels must be +1 or -1");
  }
}

double LogisticObjective::value(const std::vector<double>& weights, double bias) const {
  double loss = 0.0;
  for (std::size_t i = 0; i < examples_.size(); ++i) {
    double z = bias;
    for (const auto& [idx, w] : examples_[i]->entries) z += weights[idx] * w;
    loss += log1pexp(-labels_[i] * z);
  }
  double reg = 0.0;
  for (double w : weights) reg += w * w;
  return 0.5 * reg + reg_c_ * loss;
}

void LogisticObjective::gradient(const std::vector<double>& weights, double bias,
                                 std::vector<double>* grad_weights,
                                 double* grad_bias) const {
  grad_weights->assign(weights.begin(), weights.end());
  double gb = 0.0;
  for (std::size_t i = 0; i < examples_.size(); ++i) {
    const double y = labels_[i];
    double z = bias;
    for (const auto& [idx, w] : examples_[i]->entries) z += weights[idx] * w;
    // d/dz of log(1+exp(-y z)) is -y * sigmoid(-y z)
    const double coeff = reg_c_ * -y * sigmoid(-y * z);
    for (const auto& [idx, w] : examples_[i]->entries) {
      (*grad_weights)[idx] += coeff * w;
    }
    gb += coeff;
  }
  *grad_bias = gb;
}

OptimizeResult minimize_logistic(const LogisticObjective& objective, double tol,
                                 int max_iters,
                                 const std::function<void(int, double)>& on_iteration) {
  const std::size_t dim = objective.dim();
  const std::size_t n = dim + 1;  // weights plus bias

  std::vector<double> x(dim, 0.0);
  double b = 0.0;

  std::vector<double> grad(dim);
  double grad_b = 0.0;
  objective.gradient(x, b, &grad, &grad_b);
  double value = objective.value(x, b);

  // L-BFGS history of (s, y) displacement pairs over the joint (w, b) vector.
  constexpr std::size_t kHistory = 8;
  std::vector<std::vector<double>> s_hist, y_hist;
  std::vector<double> rho_hist;

  OptimizeResult best;
  best.weights = x;
  best.bias = b;

  double best_value = value;
  bool converged = max_norm(grad, grad_b) <= tol;
  int iter = 0;
  if (on_iteration) on_iteration(0, value);

  std::vector<double> direction(n), flat_grad(n), alpha(kHistory);
  std::vector<double> new_x(dim), new_grad(dim);

  while (!converged && iter < max_iters) {
    for (std::size_t i = 0; i < dim; ++i) flat_grad[i] = grad[i];
    flat_grad[dim] = grad_b;

    // Two-loop recursion.
    direction = flat_grad;
    const std::size_t h = s_hist.size();
    for (std::size_t k = h; k-- > 0;) {
      double dot = 0.0;
      for (std::size_t i = 0; i < n; ++i) dot += s_hist[k][i] * direction[i];
      alpha[k] = rho_hist[k] * dot;
      for (std::size_t i = 0; i < n; ++i) direction[i] -= alpha[k] * y_hist[k][i];
    }
    if (h > 0) {
      double sy = 1.0 / rho_hist[h - 1];
      double yy = 0.0;
      for (double v : y_hist[h - 1]) yy += v * v;
      const double gamma = sy / yy;
      for (double& v : direction) v *= gamma;
    }
    for (std::size_t k = 0; k < h; ++k) {
      double dot = 0.0;
      for (std::size_t i = 0; i < n; ++i) dot += y_hist[k][i] * direction[i];
      const double beta = rho_hist[k] * dot;
      for (std::size_t i = 0; i < n; ++i) direction[i] += (alpha[k] - beta) * s_hist[k][i];
    }
    for (double& v : direction) v = -v;

    double descent = 0.0;
    for (std::size_t i = 0; i < n; ++i) descent += direction[i] * flat_grad[i];
    if (!(descent < 0.0)) {
      // Fall back to steepest descent and drop the stale curvature pairs.
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
      for (std::size_t i = 0; i < n; ++i) direction[i] = -flat_grad[i];
      descent = 0.0;
      for (std::size_t i = 0; i < n; ++i) descent += direction[i] * flat_grad[i];
    }

    // Armijo backtracking.
    constexpr double kArmijo = 1e-4;
    double step = 1.0;
    if (s_hist.empty()) {
      const double gnorm = std::sqrt(-descent);
      if (gnorm > 1.0) step = 1.0 / gnorm;
    }
    double new_value = 0.0;
    double new_b = 0.0;
    bool accepted = false;
    for (int trial = 0; trial < 60; ++trial) {
      for (std::size_t i = 0; i < dim; ++i) new_x[i] = x[i] + step * direction[i];
      new_b = b + step * direction[dim];
      new_value = objective.value(new_x, new_b);
      if (new_value <= value + kArmijo * step * descent) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;  // step underflow; keep best iterate

    double new_grad_b = 0.0;
    objective.gradient(new_x, new_b, &new_grad, &new_grad_b);

    // Curvature update; skip pairs that would break positive definiteness.
    std::vector<double> s(n), yv(n);
    double sy = 0.0, ss = 0.0, yy = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      s[i] = new_x[i] - x[i];
      yv[i] = new_grad[i] - grad[i];
      sy += s[i] * yv[i];
      ss += s[i] * s[i];
      yy += yv[i] * yv[i];
    }
    s[dim] = new_b - b;
    yv[dim] = new_grad_b - grad_b;
    sy += s[dim] * yv[dim];
    ss += s[dim] * s[dim];
    yy += yv[dim] * yv[dim];
    if (sy > 1e-12 * std::sqrt(ss * yy)) {
      if (s_hist.size() == kHistory) {
        s_hist.erase(s_hist.begin());
        y_hist.erase(y_hist.begin());
        rho_hist.erase(rho_hist.begin());
      }
      s_hist.push_back(std::move(s));
      y_hist.push_back(std::move(yv));
      rho_hist.push_back(1.0 / sy);
    }

    x.swap(new_x);
    b = new_b;
    grad.swap(new_grad);
    grad_b = new_grad_b;
    value = new_value;
    ++iter;
    if (on_iteration) on_iteration(iter, value);

    if (value < best_value) {
      best_value = value;
      best.weights = x;
      best.bias = b;
    }
    converged = max_norm(grad, grad_b) <= tol;
  }

  if (value <= best_value) {
    best.weights = std::move(x);
    best.bias = b;
  }
  best.iterations = iter;
  best.converged = converged;
  return best;
}

ContentModel ContentModel::train(const std::vector<Tweet>& tweets, const FeatureSpace& space,
                                 const TrainConfig& cfg, std::vector<Lang> languages,
                                 std::vector<std::string>* warnings, int threads,
                                 const std::function<void(Lang, int, double)>& on_iteration) {
  cfg.validate();

  // Vectorize the usable training tweets once; undecided gold is excluded.
  std::vector<SparseVector> vectors;
  std::vector<const GoldLabel*> golds;
  for (const Tweet& tweet : tweets) {
    if (!tweet.gold) continue;
    if (tweet.gold->kind() == GoldLabel::Kind::Undecided) continue;
    if (tweet.gold->kind() == GoldLabel::Kind::Ambiguous && !cfg.ambiguous_as_positives) {
      continue;
    }
    vectors.push_back(vectorize(char_ngrams(tweet.text), space));
    golds.push_back(&*tweet.gold);
  }
  if (vectors.empty()) throw ValidationError("no labeled training tweets");

  std::array<std::size_t, kNumLangs> positives{};
  for (const GoldLabel* gold : golds) {
    for (Lang lang : gold->members()) ++positives[static_cast<std::size_t>(lang)];
  }

  if (languages.empty()) {
    for (Lang lang : kAllLangs) {
      if (positives[static_cast<std::size_t>(lang)] > 0) languages.push_back(lang);
    }
  } else {
    std::sort(languages.begin(), languages.end());
    languages.erase(std::unique(languages.begin(), languages.end()), languages.end());
  }

  for (Lang lang : languages) {
    const std::size_t pos = positives[static_cast<std::size_t>(lang)];
    if (pos == 0) {
      throw ValidationError("language " + std::string(to_code(lang)) +
                            " has no positive training examples");
    }
    if (pos == golds.size()) {
      throw ValidationError("language " + std::string(to_code(lang)) +
                            " has no negative training examples");
    }
  }

  ContentModel model;
  model.languages_ = languages;
  model.reg_c_ = cfg.reg_c;
  model.dim_ = space.size();
  model.weights_.resize(languages.size());
  model.biases_.resize(languages.size());

  std::vector<std::string> language_warnings(languages.size());

  const auto train_one = [&](std::size_t li) {
    const Lang lang = languages[li];
    std::vector<const SparseVector*> examples;
    std::vector<int> labels;
    examples.reserve(vectors.size());
    labels.reserve(vectors.size());
    for (std::size_t i = 0; i < vectors.size(); ++i) {
      examples.push_back(&vectors[i]);
      labels.push_back(golds[i]->contains(lang) ? 1 : -1);
    }
    LogisticObjective objective(std::move(examples), std::move(labels), cfg.reg_c,
                                space.size());
    std::function<void(int, double)> iter_cb;
    if (on_iteration) {
      iter_cb = [&, lang](int it, double v) { on_iteration(lang, it, v); };
    }
    OptimizeResult result = minimize_logistic(objective, cfg.tol, cfg.max_iters, iter_cb);
    if (!result.converged) {
      language_warnings[li] = "language " + std::string(to_code(lang)) +
                              " did not reach gradient tolerance after " +
                              std::to_string(result.iterations) +
                              " iterations; keeping best iterate";
    }
    model.weights_[li] = std::move(result.weights);
    model.biases_[li] = result.bias;
  };

  // The per-language problems are independent.
  if (threads > 1 && languages.size() > 1 && !on_iteration) {
    std::vector<std::thread> pool;
    pool.reserve(languages.size());
    for (std::size_t li = 0; li < languages.size(); ++li) pool.emplace_back(train_one, li);
    for (auto& t : pool) t.join();
  } else {
    for (std::size_t li = 0; li < languages.size(); ++li) train_one(li);
  }

  if (warnings) {
    for (auto& w : language_warnings) {
      if (!w.empty()) warnings->push_back(std::move(w));
    }
  }
  return model;
}

const std::vector<double>& ContentModel::weights(Lang lang) const {
  for (std::size_t i = 0; i < languages_.size(); ++i) {
    if (languages_[i] == lang) return weights_[i];
  }
  throw ValidationError("model has no weights for language " + std::string(to_code(lang)));
}

double ContentModel::bias(Lang lang) const {
  for (std::size_t i = 0; i < languages_.size(); ++i) {
    if (languages_[i] == lang) return biases_[i];
  }
  throw ValidationError("model has no bias for language " + std::string(to_code(lang)));
}

LabelDistribution ContentModel::predict_scores(const SparseVector& vec) const {
  LabelDistribution scores;
  for (std::size_t li = 0; li < languages_.size(); ++li) {
    double z = biases_[li];
    const auto& w = weights_[li];
    for (const auto& [idx, x] : vec.entries) {
      if (idx < w.size()) z += w[idx] * x;
    }
    scores[languages_[li]] = sigmoid(z);
  }
  return scores;
}

LabelDistribution ContentModel::predict_scores(std::string_view text,
                                               const FeatureSpace& space) const {
  return predict_scores(vectorize(char_ngrams(text), space));
}

namespace {

std::string format_full(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(std::string_view text, std::string_view context) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ParseError(std::string(context) + "bad number '" + std::string(text) + "'");
  }
  return v;
}

}  // namespace

void ContentModel::save(std::ostream& out) const {
  out << "languages\t";
  for (std::size_t i = 0; i < languages_.size(); ++i) {
    if (i) out << ' ';
    out << to_code(languages_[i]);
  }
  out << "\ndimension\t" << dim_ << "\nC\t" << format_full(reg_c_) << '\n';
  for (std::size_t li = 0; li < languages_.size(); ++li) {
    for (double w : weights_[li]) out << format_full(w) << ' ';
    out << format_full(biases_[li]) << '\n';
  }
}

ContentModel ContentModel::load(std::istream& in, std::string_view source) {
  const std::string src(source);
  ContentModel model;
  std::string line;

  auto expect_line = [&](std::string_view key) -> std::string {
    if (!std::getline(in, line)) throw ParseError(src + ": truncated model file");
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos || std::string_view(line).substr(0, tab) != key) {
      throw ParseError(src + ": expected '" + std::string(key) + "' header line");
    }
    return line.substr(tab + 1);
  };

  std::istringstream langs(expect_line("languages"));
  std::string code;
  while (langs >> code) {
    auto lang = lang_from_code(code);
    if (!lang) throw ParseError(src + ": unknown language code '" + code + "'");
    model.languages_.push_back(*lang);
  }
  if (model.languages_.empty()) throw ParseError(src + ": model has no languages");

  const std::string dim_text = expect_line("dimension");
  std::size_t dim = 0;
  auto [p, ec] = std::from_chars(dim_text.data(), dim_text.data() + dim_text.size(), dim);
  if (ec != std::errc() || p != dim_text.data() + dim_text.size()) {
    throw ParseError(src + ": bad dimension");
  }
  model.dim_ = dim;
  model.reg_c_ = parse_double(expect_line("C"), src + ": ");

  for (std::size_t li = 0; li < model.languages_.size(); ++li) {
    if (!std::getline(in, line)) throw ParseError(src + ": missing weight rows");
    std::vector<double> values;
    values.reserve(dim + 1);
    std::size_t start = 0;
    while (start < line.size()) {
      std::size_t space = line.find(' ', start);
      if (space == std::string::npos) space = line.size();
      if (space > start) {
        values.push_back(parse_double(std::string_view(line).substr(start, space - start),
                                      src + ": "));
      }
      start = space + 1;
    }
    if (values.size() != dim + 1) {
      throw ParseError(src + ": weight row " + std::to_string(li + 1) + " has " +
                       std::to_string(values.size()) + " values, expected " +
                       std::to_string(dim + 1));
    }
    model.biases_.push_back(values.back());
    values.pop_back();
    model.weights_.push_back(std::move(values));
  }
  return model;
}

void ContentModel::save_file(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write model file '" + path + "'");
  save(out);
}

ContentModel ContentModel::load_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open model file '" + path + "'");
  return load(in, path);
}

LabelDistribution normalize(const LabelDistribution& scores) {
  for (Lang lang : kAllLangs) {
    if (scores[lang] < 0.0) throw ValidationError("scores must be non-negative");
  }
  return scores.normalized();
}

}  // namespace langprop
