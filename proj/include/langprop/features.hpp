#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "langprop/errors.hpp"

namespace langprop {

/// Sparse feature vector: (index, weight) entries sorted by index, no stored
/// zeros.
struct SparseVector {
  std::vector<std::pair<std::uint32_t, double>> entries;

  /// Merge-join dot product. Products accumulate in ascending index order,
  /// so dot(a, b) == dot(b, a) bitwise.
  double dot(const SparseVector& other) const;
  double squared_norm() const;
  double norm() const;

  bool operator==(const SparseVector&) const = default;
};

/// Character n-grams (code points, not bytes) of every whitespace-separated
/// word, n_min <= n <= n_max, with multiplicity. N-grams never cross word
/// boundaries; words shorter than n contribute nothing at that n.
std::vector<std::string> char_ngrams(std::string_view text, int n_min = 2, int n_max = 5);

/// Whitespace-split tokens with multiplicity; no normalization.
std::vector<std::string> word_unigrams(std::string_view text);

/// Feature-string to dense-index dictionary, indices contiguous in [0, size).
class FeatureSpace {
 public:
  /// Keeps features whose document frequency is >= min_df, indexed by first
  /// appearance. Throws ValidationError on an empty corpus or when the
  /// filter leaves nothing.
  static FeatureSpace build(const std::vector<std::vector<std::string>>& corpus,
                            int min_df = 1);

  std::size_t size() const { return features_.size(); }
  std::optional<std::uint32_t> index_of(std::string_view feature) const;
  const std::string& feature_at(std::uint32_t index) const { return features_[index]; }

  /// TSV of "feature TAB index" lines; TAB, LF and backslash in the feature
  /// are escaped as \t, \n, \\.
  void save(std::ostream& out) const;
  static FeatureSpace load(std::istream& in, std::string_view source = "feature space");
  void save_file(const std::string& path) const;
  static FeatureSpace load_file(const std::string& path);

 private:
  std::unordered_map<std::string, std::uint32_t> index_;
  std::vector<std::string> features_;
};

/// Counts of in-vocabulary features; out-of-vocabulary features are dropped.
SparseVector vectorize(const std::vector<std::string>& features, const FeatureSpace& space);

}  // namespace langprop
