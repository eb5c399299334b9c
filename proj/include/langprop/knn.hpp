#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "langprop/corpus.hpp"
#include "langprop/features.hpp"

namespace langprop {

struct KnnConfig {
  double k_fraction = 0.25;      // k = max(1, floor(k_fraction * ntweets))
  std::optional<int> k_max;      // optional absolute cap

  void validate() const;
};

int effective_k(const KnnConfig& cfg, std::size_t n_tweets);

struct Neighbor {
  std::uint32_t index;  // position in the tweet list
  double similarity;    // in [0, 1]

  bool operator==(const Neighbor&) const = default;
};

/// Per-tweet neighbor lists, parallel to the input tweet order. Lists are
/// sorted by descending similarity (ties by ascending tweet id), contain at
/// most k entries, never the tweet itself and never zero similarities.
using NeighborLists = std::vector<std::vector<Neighbor>>;

/// Cosine similarity dot(a,b)/(|a||b|), 0 when either vector is empty.
/// Symmetric bitwise; clamped into [0, 1].
double cosine(const SparseVector& a, const SparseVector& b);

/// Exact top-k cosine neighbors over word-unigram count vectors, computed
/// through an inverted index: only tweets sharing at least one word are
/// scored, which is lossless because disjoint tweets have cosine 0.
NeighborLists top_k_neighbors(const std::vector<Tweet>& tweets, const KnnConfig& cfg = {},
                              int threads = 1);

/// TSV dump: tweet_id TAB neighbor_id TAB similarity (6 decimals).
void write_neighbors(std::ostream& out, const std::vector<Tweet>& tweets,
                     const NeighborLists& lists);

}  // namespace langprop
