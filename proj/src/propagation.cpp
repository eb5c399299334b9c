#include "langprop/propagation.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <thread>

namespace langprop {

void MadConfig::validate() const {
  if (!(mu1 > 0.0) || !(mu2 > 0.0) || !(mu3 > 0.0)) {
    throw ValidationError("mu1, mu2, mu3 must be positive");
  }
  if (!(beta > 1.0)) throw ValidationError("beta must be greater than 1");
  if (max_iters < 1) throw ValidationError("max_iters must be at least 1");
  if (!(tol > 0.0)) throw ValidationError("tol must be positive");
}

std::vector<NodeWalkProbs> compute_walk_probs(const Adjacency& adjacency,
                                              const std::vector<char>& seeded,
                                              double beta) {
  if (seeded.size() != adjacency.size()) {
    throw ValidationError("seeded flags must cover every node");
  }
  if (!(beta > 1.0)) throw ValidationError("beta must be greater than 1");

  std::vector<NodeWalkProbs> probs(adjacency.size());
  for (std::size_t v = 0; v < adjacency.size(); ++v) {
    double total = 0.0;
    for (const auto& [u, w] : adjacency[v]) {
      (void)u;
      if (!(w > 0.0)) throw ValidationError("edge weights must be positive");
      total += w;
    }
    if (adjacency[v].empty() || !(total > 0.0)) {
      throw ValidationError("node " + std::to_string(v) + " is isolated");
    }
    double entropy = 0.0;
    for (const auto& [u, w] : adjacency[v]) {
      (void)u;
      const double p = w / total;
      entropy -= p * std::log(p);
    }
    entropy = std::max(entropy, 0.0);  // guard tiny negative rounding
    const double c = std::log(beta) / std::log(beta + std::exp(entropy));
    const double d = seeded[v] ? (1.0 - c) * std::sqrt(entropy) : 0.0;
    const double z = std::max(c + d, 1.0);
    NodeWalkProbs& p = probs[v];
    p.cont = c / z;
    p.inj = d / z;
    p.abnd = std::max(1.0 - p.cont - p.inj, 0.0);
  }
  return probs;
}

MadResult propagate(const Adjacency& adjacency,
                    const std::vector<std::vector<double>>& seeds,
                    std::size_t num_labels, const MadConfig& cfg, int threads) {
  cfg.validate();
  if (num_labels == 0) throw ValidationError("num_labels must be positive");
  if (seeds.size() != adjacency.size()) {
    throw ValidationError("seed rows must cover every node");
  }

  const std::size_t n = adjacency.size();
  std::vector<char> seeded(n, 0);
  bool any_seed = false;
  for (std::size_t v = 0; v < n; ++v) {
    if (seeds[v].empty()) continue;
    if (seeds[v].size() != num_labels) {
      throw ValidationError("seed row has wrong label count");
    }
    for (double p : seeds[v]) {
      if (p < 0.0) throw ValidationError("seed probabilities must be non-negative");
    }
    seeded[v] = 1;
    any_seed = true;
  }
  if (!any_seed) throw ValidationError("propagation requires at least one seeded node");

  for (std::size_t v = 0; v < n; ++v) {
    for (const auto& [u, w] : adjacency[v]) {
      (void)w;
      if (u >= n) throw ValidationError("adjacency references unknown node");
      if (u == v) throw ValidationError("adjacency contains a self-loop");
    }
  }

  const std::vector<NodeWalkProbs> walk = compute_walk_probs(adjacency, seeded, cfg.beta);

  // W'(v,u) = p_cont(v)·W(v,u) + p_cont(u)·W(u,v); W is symmetric.
  Adjacency modified(n);
  std::vector<double> norm(n, 0.0);
  for (std::size_t v = 0; v < n; ++v) {
    modified[v].reserve(adjacency[v].size());
    double sum = 0.0;
    for (const auto& [u, w] : adjacency[v]) {
      const double wprime = (walk[v].cont + walk[u].cont) * w;
      modified[v].emplace_back(u, wprime);
      sum += wprime;
    }
    norm[v] = cfg.mu1 * walk[v].inj + cfg.mu2 * sum + cfg.mu3;
  }

  const std::size_t cols = num_labels + 1;  // dummy last
  std::vector<std::vector<double>> current(n, std::vector<double>(cols, 0.0));
  for (std::size_t v = 0; v < n; ++v) {
    if (!seeds[v].empty()) {
      std::copy(seeds[v].begin(), seeds[v].end(), current[v].begin());
    }
  }
  std::vector<std::vector<double>> next(n, std::vector<double>(cols, 0.0));

  const int worker_count = std::max(1, threads);
  MadResult result;
  result.num_labels = num_labels;

  std::vector<double> neighbor_sum(cols, 0.0);
  auto update_node = [&](std::size_t v, std::vector<double>& sum_buf) -> double {
    std::fill(sum_buf.begin(), sum_buf.end(), 0.0);
    for (const auto& [u, wprime] : modified[v]) {
      const std::vector<double>& row = current[u];
      for (std::size_t l = 0; l < cols; ++l) sum_buf[l] += wprime * row[l];
    }
    const double inj_scale = cfg.mu1 * walk[v].inj;
    double max_change = 0.0;
    for (std::size_t l = 0; l < cols; ++l) {
      double value = cfg.mu2 * sum_buf[l];
      if (!seeds[v].empty() && l < num_labels) value += inj_scale * seeds[v][l];
      if (l == num_labels) value += cfg.mu3 * walk[v].abnd;
      value /= norm[v];
      next[v][l] = value;
      max_change = std::max(max_change, std::abs(value - current[v][l]));
    }
    return max_change;
  };

  for (int iter = 0; iter < cfg.max_iters; ++iter) {
    double max_change = 0.0;
    if (worker_count == 1 || n < 64) {
      for (std::size_t v = 0; v < n; ++v) {
        max_change = std::max(max_change, update_node(v, neighbor_sum));
      }
    } else {
      std::vector<double> worker_max(static_cast<std::size_t>(worker_count), 0.0);
      std::atomic<std::size_t> cursor{0};
      std::vector<std::thread> pool;
      pool.reserve(static_cast<std::size_t>(worker_count));
      for (int t = 0; t < worker_count; ++t) {
        pool.emplace_back([&, t] {
          std::vector<double> local_sum(cols, 0.0);
          double local_max = 0.0;
          constexpr std::size_t kChunk = 256;
          while (true) {
            const std::size_t begin = cursor.fetch_add(kChunk);
            if (begin >= n) break;
            const std::size_t end = std::min(begin + kChunk, n);
            for (std::size_t v = begin; v < end; ++v) {
              local_max = std::max(local_max, update_node(v, local_sum));
            }
          }
          worker_max[static_cast<std::size_t>(t)] = local_max;
        });
      }
      for (std::thread& t : pool) t.join();
      for (double m : worker_max) max_change = std::max(max_change, m);
    }

    current.swap(next);
    result.iterations = iter + 1;
    if (max_change < cfg.tol) {
      result.converged = true;
      break;
    }
  }

  result.scores = std::move(current);
  return result;
}

MadResult propagate(const SocialGraph& graph, const MadConfig& cfg, int threads) {
  std::vector<std::vector<double>> seeds(graph.node_count());
  for (const auto& [index, dist] : graph.seeds()) {
    std::vector<double> row(kNumLangs, 0.0);
    for (Lang lang : kAllLangs) row[static_cast<std::size_t>(lang)] = dist[lang];
    seeds[index] = std::move(row);
  }
  return propagate(graph.adjacency(), seeds, kNumLangs, cfg, threads);
}

LabelDistribution renormalize_scores(const std::vector<double>& row) {
  if (row.size() != kNumLangs && row.size() != kNumLangs + 1) {
    throw ValidationError("expected scores for the six languages");
  }
  LabelDistribution dist;
  for (Lang lang : kAllLangs) {
    const double v = row[static_cast<std::size_t>(lang)];
    if (v < 0.0) throw ValidationError("scores must be non-negative");
    dist[lang] = v;
  }
  return dist.normalized();
}

namespace {

constexpr std::string_view kDummyLabel = "dummy";

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

void write_propagation(std::ostream& out, const SocialGraph& graph,
                       const MadResult& result) {
  if (result.scores.size() != graph.node_count() || result.num_labels != kNumLangs) {
    throw ValidationError("propagation result does not match the graph");
  }
  char buf[40];
  for (std::size_t v = 0; v < graph.node_count(); ++v) {
    const NodeRef& node = graph.node(static_cast<SocialGraph::NodeIndex>(v));
    out << to_string(node.kind) << '\t' << node.key << '\t';
    const std::vector<double>& row = result.scores[v];
    for (std::size_t l = 0; l < row.size(); ++l) {
      if (l != 0) out << ',';
      out << (l < kNumLangs ? to_code(kAllLangs[l]) : kDummyLabel);
      std::snprintf(buf, sizeof buf, ":%.6f", row[l]);
      out << buf;
    }
    out << '\n';
  }
}

void write_propagation_file(const std::string& path, const SocialGraph& graph,
                            const MadResult& result) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write propagation file '" + path + "'");
  write_propagation(out, graph, result);
}

std::unordered_map<std::string, LabelDistribution> load_tweet_social(
    std::istream& in, std::string_view source) {
  const std::string src(source);
  std::unordered_map<std::string, LabelDistribution> social;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::string context = src + ":" + std::to_string(line_no) + ": ";
    auto fields = split_on(line, '\t');
    if (fields.size() != 3) {
      throw ParseError(context + "expected 'node_kind<TAB>key<TAB>label:score,...'");
    }
    auto kind = node_kind_from_string(fields[0]);
    if (!kind) throw ParseError(context + "unknown node kind '" + std::string(fields[0]) + "'");
    if (*kind != NodeKind::Tweet) continue;
    if (fields[1].empty()) throw ParseError(context + "empty tweet id");

    LabelDistribution dist;
    for (std::string_view part : split_on(fields[2], ',')) {
      auto sep = part.find(':');
      if (sep == std::string_view::npos) throw ParseError(context + "expected 'label:score'");
      const std::string_view label = part.substr(0, sep);
      const std::string_view score_text = part.substr(sep + 1);
      double score = 0.0;
      auto [ptr, ec] = std::from_chars(score_text.data(),
                                       score_text.data() + score_text.size(), score);
      if (ec != std::errc() || ptr != score_text.data() + score_text.size()) {
        throw ParseError(context + "bad score '" + std::string(score_text) + "'");
      }
      if (score < 0.0) throw ParseError(context + "scores must be non-negative");
      if (label == kDummyLabel) continue;
      auto lang = lang_from_code(label);
      if (!lang) throw ParseError(context + "unknown label '" + std::string(label) + "'");
      dist[*lang] = score;
    }
    if (!social.emplace(std::string(fields[1]), dist.normalized()).second) {
      throw ParseError(context + "duplicate tweet '" + std::string(fields[1]) + "'");
    }
  }
  return social;
}

std::unordered_map<std::string, LabelDistribution> load_tweet_social_file(
    const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open propagation file '" + path + "'");
  return load_tweet_social(in, path);
}

}  // namespace langprop
