#include "langprop/knn.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <thread>

namespace langprop {

void KnnConfig::validate() const {
  if (!(k_fraction > 0.0) || k_fraction > 1.0) {
    throw ValidationError("k_fraction must be in (0, 1]");
  }
  if (k_max && *k_max < 1) throw ValidationError("k_max must be >= 1");
}

int effective_k(const KnnConfig& cfg, std::size_t n_tweets) {
  cfg.validate();
  const double scaled = cfg.k_fraction * static_cast<double>(n_tweets);
  int k = std::max(1, static_cast<int>(std::floor(scaled)));
  if (cfg.k_max) k = std::min(k, *cfg.k_max);
  return k;
}

double cosine(const SparseVector& a, const SparseVector& b) {
  const double dot = a.dot(b);
  if (dot == 0.0) return 0.0;
  const double sim = dot / (a.norm() * b.norm());
  return std::clamp(sim, 0.0, 1.0);
}

NeighborLists top_k_neighbors(const std::vector<Tweet>& tweets, const KnnConfig& cfg,
                              int threads) {
  cfg.validate();
  const std::size_t n = tweets.size();
  NeighborLists lists(n);
  if (n < 2) return lists;
  const std::size_t k = static_cast<std::size_t>(effective_k(cfg, n));

  // Unigram count vectors over a corpus-local vocabulary.
  std::vector<std::vector<std::string>> docs(n);
  for (std::size_t i = 0; i < n; ++i) docs[i] = word_unigrams(tweets[i].text);
  bool any_tokens = false;
  for (const auto& doc : docs) {
    if (!doc.empty()) {
      any_tokens = true;
      break;
    }
  }
  if (!any_tokens) return lists;  // all-empty corpus: no neighbors anywhere

  const FeatureSpace vocab = FeatureSpace::build(docs, 1);
  std::vector<SparseVector> vectors(n);
  std::vector<double> norms(n);
  for (std::size_t i = 0; i < n; ++i) {
    vectors[i] = vectorize(docs[i], vocab);
    norms[i] = vectors[i].norm();
  }

  // Postings per word, tweet indices ascending.
  std::vector<std::vector<std::pair<std::uint32_t, double>>> postings(vocab.size());
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& [word, count] : vectors[i].entries) {
      postings[word].emplace_back(static_cast<std::uint32_t>(i), count);
    }
  }

  const auto query = [&](std::size_t i, std::vector<double>& dots,
                         std::vector<std::uint32_t>& touched) {
    touched.clear();
    // Accumulating in ascending word order reproduces the merge-join dot
    // product bitwise, so listed similarities equal cosine() exactly.
    for (const auto& [word, count] : vectors[i].entries) {
      for (const auto& [j, other_count] : postings[word]) {
        if (j == i) continue;
        if (dots[j] == 0.0) touched.push_back(j);
        dots[j] += count * other_count;
      }
    }
    std::vector<Neighbor> candidates;
    candidates.reserve(touched.size());
    for (std::uint32_t j : touched) {
      const double sim = std::clamp(dots[j] / (norms[i] * norms[j]), 0.0, 1.0);
      dots[j] = 0.0;
      if (sim > 0.0) candidates.push_back({j, sim});
    }
    const auto better = [&](const Neighbor& a, const Neighbor& b) {
      if (a.similarity != b.similarity) return a.similarity > b.similarity;
      return tweets[a.index].id < tweets[b.index].id;
    };
    if (candidates.size() > k) {
      std::partial_sort(candidates.begin(), candidates.begin() + k, candidates.end(),
                        better);
      candidates.resize(k);
    } else {
      std::sort(candidates.begin(), candidates.end(), better);
    }
    lists[i] = std::move(candidates);
  };

  const int workers = std::max(1, std::min<int>(threads, static_cast<int>(n)));
  if (workers == 1) {
    std::vector<double> dots(n, 0.0);
    std::vector<std::uint32_t> touched;
    for (std::size_t i = 0; i < n; ++i) query(i, dots, touched);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        std::vector<double> dots(n, 0.0);
        std::vector<std::uint32_t> touched;
        for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
          query(i, dots, touched);
        }
      });
    }
    for (auto& t : pool) t.join();
  }
  return lists;
}

void write_neighbors(std::ostream& out, const std::vector<Tweet>& tweets,
                     const NeighborLists& lists) {
  char buf[32];
  for (std::size_t i = 0; i < lists.size(); ++i) {
    for (const Neighbor& nb : lists[i]) {
      std::snprintf(buf, sizeof buf, "%.6f", nb.similarity);
      out << tweets[i].id << '\t' << tweets[nb.index].id << '\t' << buf << '\n';
    }
  }
}

}  // namespace langprop
