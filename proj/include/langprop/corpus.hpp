#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "langprop/errors.hpp"
#include "langprop/labels.hpp"

namespace langprop {

/// Gold annotation of a tweet: exactly one language, an ambiguous set of at
/// least two, or undecided (no member languages).
class GoldLabel {
 public:
  enum class Kind { Single, Ambiguous, Undecided };

  static GoldLabel single(Lang lang);
  /// Members must be >=2 distinct languages; stored in canonical order.
  static GoldLabel ambiguous(std::vector<Lang> members);
  static GoldLabel undecided();

  Kind kind() const { return kind_; }
  const std::vector<Lang>& members() const { return members_; }
  bool contains(Lang lang) const;

  bool operator==(const GoldLabel&) const = default;

 private:
  GoldLabel(Kind kind, std::vector<Lang> members)
      : kind_(kind), members_(std::move(members)) {}

  Kind kind_ = Kind::Undecided;
  std::vector<Lang> members_;
};

struct Tweet {
  std::string id;
  std::string author;
  std::string text;
  std::optional<GoldLabel> gold;

  bool operator==(const Tweet&) const = default;
};

/// Unordered user pair, stored with first < second.
using UserPair = std::pair<std::string, std::string>;

struct Dataset {
  std::vector<Tweet> tweets;
  std::vector<UserPair> follows;  // sorted, deduplicated

  bool operator==(const Dataset&) const = default;
};

/// Label field of the tweets TSV: "" (absent), a language code, a
/// '/'-joined set of >=2 distinct codes, or "und".
std::optional<GoldLabel> parse_gold_field(std::string_view field);
std::string format_gold(const GoldLabel& gold);

/// One tweet per line: id TAB author TAB label TAB text. Throws ParseError
/// with line context on malformed lines, unknown codes or duplicate ids.
std::vector<Tweet> parse_tweets(std::istream& in, std::string_view source = "tweets");
std::vector<Tweet> load_tweets(const std::string& path);
void write_tweets(std::ostream& out, const std::vector<Tweet>& tweets);
void write_tweets_file(const std::string& path, const std::vector<Tweet>& tweets);

/// One "userA TAB userB" pair per line. Self-loops are skipped (counted in
/// *skipped_self_loops when given); direction is discarded and duplicates
/// collapse.
std::vector<UserPair> parse_follows(std::istream& in, std::string_view source = "follows",
                                    std::size_t* skipped_self_loops = nullptr);
std::vector<UserPair> load_follows(const std::string& path,
                                   std::size_t* skipped_self_loops = nullptr);
void write_follows(std::ostream& out, const std::vector<UserPair>& follows);
void write_follows_file(const std::string& path, const std::vector<UserPair>& follows);

/// Tweets from both splits plus the follow edges; rejects ids that appear in
/// both splits.
Dataset merge_dataset(const std::vector<Tweet>& train, const std::vector<Tweet>& test,
                      std::vector<UserPair> follows);

/// Initial label distribution a gold annotation injects into the graph:
/// point mass for a single label, uniform over the members of an ambiguous
/// set, uniform over all languages for undecided.
LabelDistribution seed_distribution(const GoldLabel& gold);

}  // namespace langprop
